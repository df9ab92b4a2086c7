import os

import pytest

os.environ.setdefault("VOLCOMP_QUAD", "standard")


@pytest.fixture(scope="session")
def rng():
    import numpy as np
    return np.random.default_rng(20240601)


def pytest_terminal_summary(terminalreporter):
    """One PASS/FAIL line per acceptance criterion."""
    results = {}
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(rep, "nodeid", "")
            if "test_acceptance.py::test_criterion_" not in nodeid or rep.when not in ("call", "setup"):
                continue
            num = int(nodeid.split("test_criterion_")[1][:2])
            ok = outcome == "passed"
            results[num] = results.get(num, True) and ok
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(results):
        terminalreporter.write_line(f"criterion {num:2d}: {'PASS' if results[num] else 'FAIL'}")
