"""Run every named preset and write trajectories, heatmaps and reports.

    python scripts/run_presets.py --out runs/ [--only fig1a fig3b]
"""

import argparse
import time
from pathlib import Path

from spinsoliton.harness import PRESETS, resolve_preset, run_experiment
from spinsoliton.storage import write_report


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Path("runs"))
    ap.add_argument("--only", nargs="*", default=[p for p in PRESETS if p != "custom"])
    args = ap.parse_args()
    failed = []
    for name in args.only:
        t0 = time.perf_counter()
        report = run_experiment(resolve_preset(name))
        write_report(report, args.out / name, heatmaps=True)
        status = "PASS" if report.passed else "FAIL"
        print(f"{name:<6} {status}  {time.perf_counter() - t0:6.1f} s")
        for key, ok in report.assertions.items():
            if not ok:
                print(f"       failed: {key}")
                failed.append(f"{name}:{key}")
    return 1 if failed else 0


if __name__ == "__main__":
    raise SystemExit(main())
