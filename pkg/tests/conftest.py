"""Prints one PASS/FAIL line per acceptance criterion at the end of the run."""

_results = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(text): acceptance criterion description")


def pytest_runtest_logreport(report):
    if "acceptance" not in report.keywords:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _results[report.nodeid] = (report.outcome, report.duration)


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark:
            item.user_properties.append(("criterion", mark.args[0]))
            _labels[item.nodeid] = mark.args[0]


_labels = {}


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for nodeid, text in _labels.items():
        if nodeid not in _results:
            continue
        outcome, duration = _results[nodeid]
        status = "PASS" if outcome == "passed" else "FAIL"
        tr.write_line(f"{status}  {text}  [{duration:.2f} s]")
