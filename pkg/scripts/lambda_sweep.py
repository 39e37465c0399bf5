"""Full-vs-simplified deviation against lambda = B / (J delta) at theta = 0.1.

Prints the harness table; the ``deviation`` column is the normalised gap
between the full and the simplified continuum evolutions at t_end.
"""

import argparse
from dataclasses import replace

from spinsoliton.harness import FIG4_LAMBDAS, format_table, resolve_preset, sweep


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--values", type=float, nargs="+", default=list(FIG4_LAMBDAS))
    ap.add_argument("--t-end", type=float, default=3.0)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()
    base = replace(resolve_preset("fig4"), t_end=args.t_end, snapshots=None)
    rows = sweep(base, "lambda", args.values, workers=args.workers)
    print(format_table(rows, "lambda"))


if __name__ == "__main__":
    main()
