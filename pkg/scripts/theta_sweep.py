"""Regime map over the field angle: sign of c1, soliton type, short NLS run.

Crossing the magic angle flips the nonlinearity from focusing (bright) to
defocusing (dark), with a linear point in between.
"""

import argparse
from dataclasses import replace

import numpy as np

from spinsoliton.harness import format_table, resolve_preset, sweep
from spinsoliton.model import THETA_MAGIC


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=9, help="angles in [0.05, 1.5]")
    ap.add_argument("--model", default="nls")
    ap.add_argument("--t-end", type=float, default=1.0)
    args = ap.parse_args()
    values = sorted(set(np.linspace(0.05, 1.5, args.n).tolist()) | {THETA_MAGIC})
    base = replace(resolve_preset("fig1a"), model=args.model, t_end=args.t_end,
                   snapshots=None, x_min=None, x_max=None, bc=None)
    print(format_table(sweep(base, "theta", values), "theta"))


if __name__ == "__main__":
    main()
