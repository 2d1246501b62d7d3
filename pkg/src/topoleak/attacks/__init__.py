from .decoder import (
    DecoderState,
    decoder_forward,
    decoder_gra,
    decoder_gradients,
    decoder_loss,
    init_decoder,
)
from .edge import EdgeAttackResult, candidate_pairs, distance_edge_attack, two_means_threshold
from .membership import (
    MembershipReport,
    SoftmaxClassifier,
    membership_features,
    membership_inference,
    train_softmax,
)

__all__ = [
    "DecoderState", "decoder_forward", "decoder_gra", "decoder_gradients", "decoder_loss",
    "init_decoder",
    "EdgeAttackResult", "candidate_pairs", "distance_edge_attack", "two_means_threshold",
    "MembershipReport", "SoftmaxClassifier", "membership_features", "membership_inference",
    "train_softmax",
]
