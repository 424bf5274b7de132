"""Optimal gamma and maximum success probability versus depth for several levels."""

import argparse
import os
from pathlib import Path

from treesearch import output
from treesearch.search_analysis import sweep_gamma

CASES = {
    "1": lambda n: 1,
    "2": lambda n: 2,
    "n/4": lambda n: n // 4,
    "n/2": lambda n: n // 2,
    "3n/4": lambda n: 3 * n // 4,
    "n": lambda n: n,
}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", default="8,12,16,20,24,28,32,36")
    ap.add_argument("--gamma-max", type=float, default=3.0)
    ap.add_argument("--method", choices=("envelope", "scan"), default="envelope")
    ap.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    ap.add_argument("--out", default="results")
    args = ap.parse_args()
    rows = []
    for n in (int(x) for x in args.sizes.split(",")):
        for name, level in CASES.items():
            l = level(n)
            sw = sweep_gamma(n, l, gamma_max=args.gamma_max, method=args.method, workers=args.workers)
            rows.append([name, n, l, sw.gamma_prime_star, sw.p_max, sw.gamma_star])
            print(f"n={n:3d} l={name:5s} gamma'*={sw.gamma_prime_star:.3f} p_max={sw.p_max:.4f} gamma*={sw.gamma_star}")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "gamma_sweeps.csv").write_text(
        output.to_csv(["level", "n", "l", "gamma_prime_star", "p_max", "gamma_star"], rows, vars(args))
    )


if __name__ == "__main__":
    main()
