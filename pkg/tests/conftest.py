import json
from functools import lru_cache
from pathlib import Path

from exotic4.scenario import Runner, Scenario

ROOT = Path(__file__).resolve().parent.parent
SCENARIOS = ROOT / "scenarios"


def scenario_path(name):
    return SCENARIOS / f"{name}.json"


@lru_cache(maxsize=None)
def state_before(name, kind):
    """Runner state just before the first step of ``kind`` in a bundled scenario."""
    doc = json.loads(scenario_path(name).read_text(encoding="utf-8"))
    cut = next(i for i, s in enumerate(doc["steps"]) if s["kind"] == kind)
    runner = Runner(Scenario.from_dict({"name": name, "steps": doc["steps"][:cut]}))
    report = runner.run()
    assert report["verdict"] == "pass", report.get("error")
    return runner.state


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
