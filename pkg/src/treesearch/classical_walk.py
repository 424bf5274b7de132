"""Classical random-walk baseline: expected hitting times of the root.

From an interior level the walker moves to the parent with probability 1/3
and to one of the two children with probability 2/3; leaves always step up.
Only the level matters, so the walk is a birth-death chain on 1..n.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import InvalidParameter

EXACT_MAX_DEPTH = 30


@dataclass(frozen=True)
class HittingTimes:
    n: int
    per_level: tuple  # t_1..t_n, Fractions in the exact regime
    exact: bool

    @property
    def N(self) -> int:
        return 2**self.n - 1

    @property
    def weighted(self) -> tuple:
        N = self.N
        if self.exact:
            return tuple(Fraction(2 ** (k - 1), N) * t for k, t in enumerate(self.per_level, start=1))
        return tuple(2.0 ** (k - 1) / N * t for k, t in enumerate(self.per_level, start=1))

    @property
    def average(self):
        return sum(self.weighted)

    def residuals(self) -> np.ndarray:
        t = [float(x) for x in self.per_level]
        n = self.n
        res = [t[0]]
        res += [t[k] - (t[k - 1] / 3 + 2 * t[k + 1] / 3 + 1) for k in range(1, n - 1)]
        res.append(t[n - 1] - t[n - 2] - 1)
        return np.array(res)


def _thomas(sub, diag, sup, rhs):
    """Tridiagonal solve; works on Fractions or floats."""
    m = len(diag)
    c, d = list(sup), list(rhs)
    b = list(diag)
    for i in range(1, m):
        w = sub[i] / b[i - 1]
        b[i] = b[i] - w * c[i - 1]
        d[i] = d[i] - w * d[i - 1]
    x = [None] * m
    x[-1] = d[-1] / b[-1]
    for i in range(m - 2, -1, -1):
        x[i] = (d[i] - c[i] * x[i + 1]) / b[i]
    return x


def hitting_times(n: int, exact: bool | None = None) -> HittingTimes:
    """Expected steps to reach the root from each level.

    The exact route eliminates the tridiagonal system in rationals.  The float
    route uses the increments D_k = t_{k+1} - t_k, which satisfy
    D_{k-1} = 2 D_k + 3 with D_{n-1} = 1; forward elimination in floats
    cancels catastrophically because t_k grows like 2^n.
    """
    if n < 2:
        raise InvalidParameter("hitting times need n >= 2")
    if exact is None:
        exact = n <= EXACT_MAX_DEPTH
    if not exact:
        inc = [1.0]
        for _ in range(n - 2):
            inc.append(2.0 * inc[-1] + 3.0)
        inc.reverse()
        t = [0.0] + [math.fsum(inc[:k]) for k in range(1, n)]
        return HittingTimes(n=n, per_level=tuple(t), exact=False)
    one, third = Fraction(1), Fraction(1, 3)
    m = n - 1  # unknowns t_2..t_n
    sub = [-third] * m
    diag = [one] * m
    sup = [-2 * third] * m
    rhs = [one] * m
    sub[0] = Fraction(0)  # t_1 = 0
    sup[-1] = Fraction(0)
    sub[-1] = -one  # leaf row: t_n - t_{n-1} = 1
    x = _thomas(sub, diag, sup, rhs)
    return HittingTimes(n=n, per_level=tuple([Fraction(0)] + x), exact=True)


def classical_complexity_class(n: int) -> dict:
    """Evidence for linear classical search time: t_2 = N - 2 and T >= t_2 (N-1)/N."""
    ht = hitting_times(n)
    N = ht.N
    t2 = ht.per_level[1]
    bound = t2 * Fraction(N - 1, N) if ht.exact else float(t2) * (N - 1) / N
    return {
        "n": n,
        "N": N,
        "t2": int(t2) if ht.exact else float(t2),
        "t2_equals_N_minus_2": bool(t2 == N - 2) if ht.exact else bool(abs(t2 - (N - 2)) <= 1e-9 * N),
        "average_time": float(ht.average),
        "lower_bound": float(bound),
        "average_above_bound": bool(ht.average >= bound),
        "t2_over_N": float(t2) / N,
        "all_integer": bool(all(Fraction(t).denominator == 1 for t in ht.per_level)) if ht.exact else None,
    }


def _simulate_batch(job: tuple[int, int, int, np.random.SeedSequence]) -> tuple[int, float, float]:
    n, start, size, seed = job
    rng = np.random.default_rng(seed)
    level = np.full(size, start, dtype=np.int64)
    steps = np.zeros(size, dtype=np.int64)
    active = np.flatnonzero(level > 1)
    while active.size:
        lv = level[active]
        up = (lv == n) | (rng.random(active.size) < 1.0 / 3.0)
        level[active] = np.where(up, lv - 1, lv + 1)
        steps[active] += 1
        active = active[level[active] > 1]
    return size, float(steps.sum()), float((steps.astype(float) ** 2).sum())


def monte_carlo_hitting(
    n: int, start_level: int, walks: int, seed: int = 0, batches: int = 16, workers: int = 1
) -> tuple[float, float]:
    """Mean hitting time of the root from ``start_level`` and its standard error."""
    if not 1 <= start_level <= n:
        raise InvalidParameter("start level out of range")
    seeds = np.random.SeedSequence(seed).spawn(batches)
    sizes = [walks // batches + (1 if i < walks % batches else 0) for i in range(batches)]
    jobs = [(n, start_level, s, sd) for s, sd in zip(sizes, seeds)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_simulate_batch, jobs))
    else:
        parts = [_simulate_batch(j) for j in jobs]
    count = sum(p[0] for p in parts)
    total = sum(p[1] for p in parts)
    sq = sum(p[2] for p in parts)
    mean = total / count
    var = sq / count - mean**2
    return mean, float(np.sqrt(var * count / (count - 1) / count))
