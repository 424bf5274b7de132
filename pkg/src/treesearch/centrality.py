"""Closeness and betweenness of a site on level l, in closed form.

Both measures are normalised by the value at the centre of a star graph on
the same number of sites: closeness by 1/(N-1), betweenness (ordered pairs)
by (N-1)(N-2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameter
from .tree_core import TreeParams


def distance_sum(n: int, l: int) -> int:
    """Sum of distances from a level-l site to every site, by counting levels."""
    TreeParams(n, l)
    total = sum(j * 2**j for j in range(1, n - l + 1))
    for k in range(1, l):
        up = l - k
        total += up  # the ancestor itself
        # the ancestor's other subtree hangs one step further away
        total += sum((up + 1 + d) * 2**d for d in range(n - k))
    return total


def closeness(n: int, l: int) -> tuple[float | None, float | None]:
    s = distance_sum(n, l)
    if s == 0:
        return None, None
    N = 2**n - 1
    return 1.0 / s, (N - 1) / s


def components(n: int, l: int) -> list[int]:
    """Sizes of the pieces left after deleting a level-l site."""
    TreeParams(n, l)
    N = 2**n - 1
    child = 2 ** (n - l) - 1
    parts = [child, child] if l < n else []
    if l > 1:
        parts.append(N - (2 ** (n - l + 1) - 1))
    return parts


def betweenness_raw(n: int, l: int) -> int:
    N = 2**n - 1
    return (N - 1) ** 2 - sum(c * c for c in components(n, l))


def betweenness(n: int, l: int) -> tuple[int, float | None]:
    N = 2**n - 1
    raw = betweenness_raw(n, l)
    norm = (N - 1) * (N - 2)
    return raw, (raw / norm if norm else None)


def degree(n: int, l: int) -> int:
    return len(components(n, l))


def eccentricity(n: int, l: int) -> int:
    TreeParams(n, l)
    if n == 1:
        return 0
    return n + l - 2


KAPPA_DEPTH = 64


def kappa_hat(n: int, rho: float, window: int = 12, step: int = 4) -> float:
    """Constant kappa in closeness ~ (kappa n)^-1, extrapolated in 1/n.

    Fits mean distance / n = kappa + b / n over depths n - window .. n.
    Small rho converges slowly (corrections ~ 2^(-rho n)), so tables call
    this with n = max(n, KAPPA_DEPTH); distance sums are exact and O(n).
    """
    sizes = [m for m in range(n - window, n + 1, step) if m >= 2]
    vals = []
    for m in sizes:
        l = max(1, min(m, int(round(rho * m))))
        vals.append(distance_sum(m, l) / (2**m - 2) / m)
    if len(sizes) < 2:
        return vals[-1]
    A = np.column_stack([np.ones(len(sizes)), 1.0 / np.array(sizes, dtype=float)])
    coef, *_ = np.linalg.lstsq(A, np.array(vals), rcond=None)
    return float(coef[0])


@dataclass
class CentralityRow:
    l: int
    rho: float
    beta_pred: float
    closeness_norm: float | None
    kappa_hat: float
    betweenness_norm: float | None
    betweenness_exponent: float | None
    degree: int

    @property
    def kappa_matches_2beta(self) -> bool:
        return abs(self.kappa_hat - 2 * self.beta_pred) <= 0.02 * 2 * self.beta_pred


def _rho_for(l: int, n: int) -> float:
    return 0.0 if l == 1 else l / n


def centrality_table(n: int, levels=None) -> list[CentralityRow]:
    if levels is None:
        if n % 4:
            raise InvalidParameter("default levels need n divisible by 4")
        levels = [1, n // 4, n // 2, 3 * n // 4, n]
    rows = []
    for l in levels:
        rho = _rho_for(l, n)
        _, cb = betweenness(n, l)
        # exponent of C_B against N between depth n - 4 and n at the same ratio
        m = n - 4
        lm = 1 if l == 1 else max(1, min(m, int(round(rho * m))))
        _, cb_m = betweenness(m, lm) if m >= 2 else (0, None)
        if cb and cb_m:
            expo = math.log(cb / cb_m) / math.log((2**n - 1) / (2**m - 1))
        else:
            expo = None
        rows.append(
            CentralityRow(
                l=l,
                rho=rho,
                beta_pred=0.5 + rho / 2,
                closeness_norm=closeness(n, l)[1],
                kappa_hat=kappa_hat(max(n, KAPPA_DEPTH), rho),
                betweenness_norm=cb,
                betweenness_exponent=expo,
                degree=degree(n, l),
            )
        )
    return rows
