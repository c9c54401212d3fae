import sys


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One verdict line per acceptance criterion after the normal summary."""
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None) if mod else None
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for num, label, ok in sorted(results):
        verdict = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"criterion {num:2d}  {label:<56s} {verdict}")
