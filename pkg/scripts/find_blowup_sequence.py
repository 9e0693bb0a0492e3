"""Search for the 17 infinitely close blow-ups that produce C_(305,17).

Builds the configuration right after the five double-point blow-ups (the
-18 sphere S plus the sixteen (-2)-spheres of the I16 fiber), then tries
every pattern of infinitely close blow-ups starting at Sigma0 . Sigma1 and
reports those after which a linear chain starting at S reads exactly the
C_(305,17) chain.

    python scripts/find_blowup_sequence.py [--all]
"""

import argparse
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

from build_scenarios import CHAIN_305, common_prefix  # noqa: E402

from exotic4 import lattice as lat  # noqa: E402
from exotic4.rbd import cpq_chain, CpqLabel  # noqa: E402
from exotic4.scenario import Runner, Scenario  # noqa: E402


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--all", action="store_true", help="enumerate every solution instead of stopping at the first")
    args = ap.parse_args()

    assert list(cpq_chain(CpqLabel(305, 17)).coefficients) == CHAIN_305
    runner = Runner(Scenario.from_dict({"name": "prefix", "steps": common_prefix(2)}))
    report = runner.run()
    assert report["verdict"] == "pass", report.get("error")

    names = list(runner.state.spheres)
    config = tuple(runner.state.spheres.values())
    i, j, start = names.index("Sigma0"), names.index("Sigma1"), names.index("S")
    t0 = time.perf_counter()
    hits = lat.search_infinitely_close(config, i, j, 17, start, CHAIN_305, limit=None if args.all else 1)
    dt = time.perf_counter() - t0

    print(f"searched in {dt:.2f}s, {len(hits)} solution(s)")
    for follow, path in hits:
        all_names = names + [f"E{6 + k}" for k in range(17)]
        print("  blow up Sigma0 . Sigma1, then follow:", " ".join(all_names[f] for f in follow))
        print("  chain spheres:", " ".join(all_names[k] for k in path))


if __name__ == "__main__":
    main()
