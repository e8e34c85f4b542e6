import os

from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", deadline=None, max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile("thorough", deadline=None, max_examples=400)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

PRESETS = [
    "sl(2)", "sl(3)", "sl(4)", "sl(2|1)", "sl(2|1)@anti", "sl(3|1)", "gl(1|3)",
    "gl(2|2)", "gl(2|2)@anti", "osp(2|2)", "osp(2|4)", "osp(2|4)@anti",
]
SUPER_PRESETS = [p for p in PRESETS if "|" in p]


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
