import pytest

CRITERIA = {
    1: "weighted two-variable problem: combined values, solution, blevel, best",
    2: "tell negotiation: no interleaving succeeds, store level 5",
    3: "retract negotiation: success with store 2x+2, level 2",
    4: "update: success with store y+4, level 4",
    5: "integrity refinement (crisp) and reliability spot value",
    6: "residuation matches brute-force maximum on every semiring",
    7: "constraint-algebra laws, 200 instances per semiring",
    8: "solver agrees with enumeration on 50 random problems per semiring",
    9: "parse/pretty round-trip and seeded VM determinism",
}

_results: dict[int, list[bool]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if call.when == "call" or (call.when == "setup" and call.excinfo is not None):
        _results.setdefault(marker.args[0], []).append(call.excinfo is None)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for n, label in CRITERIA.items():
        if n not in _results:
            continue
        status = "PASS" if all(_results[n]) else "FAIL"
        terminalreporter.write_line(f"criterion {n}: {status}  {label}")
