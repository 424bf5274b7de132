"""Root-amplitude traces next to the small-gamma and critical closed forms."""

import argparse
import math
from pathlib import Path

import numpy as np

from treesearch import output
from treesearch.evolution import Propagator
from treesearch.reduction import reduce
from treesearch.root_analytics import approx_critical, approx_small_gamma
from treesearch.tree_core import TreeParams

CASES = [(0.2, 8, "small"), (0.9, 15, "small"), (1.0, 15, "critical")]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--samples", type=int, default=4001)
    ap.add_argument("--out", default="results")
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for gamma, n, kind in CASES:
        if kind == "small":
            t = np.linspace(0, 200, args.samples)
            ref = np.abs(approx_small_gamma(t, gamma, 2**n - 1))
        else:
            t = np.linspace(0, 2 * math.pi * math.sqrt(2 ** (n + 1)), args.samples)
            ref = np.abs(approx_critical(t, n))
        sim = np.abs(Propagator(reduce(TreeParams(n, 1, gamma))).amplitude(t))
        cfg = {"gamma": gamma, "n": n, "samples": args.samples}
        name = f"trace_gamma{gamma}_n{n}.csv"
        (out / name).write_text(output.to_csv(["t", "abs_sim", "abs_closed_form"], zip(t, sim, ref), cfg))
        print(f"{name}: max deviation {np.abs(sim - ref).max():.4f}")


if __name__ == "__main__":
    main()
