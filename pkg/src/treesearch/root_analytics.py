"""Closed-form results for a marked root (l = 1).

The Laplace transform of the root amplitude is evaluated with the large
root x1**n divided out of numerator and denominator, so it stays finite for
any depth.  With x0 * x1 = 1 this leaves only powers of x0, all inside the
unit disk.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import InvalidParameter

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class QuadraticRoots:
    x0: complex
    x1: complex
    degenerate: bool = False


def solve_quadratic(s: complex, gamma: float = 1.0) -> QuadraticRoots:
    """Roots of x^2 - ((3 - i s / gamma) / sqrt(2)) x + 1, smaller modulus first."""
    if gamma <= 0:
        raise InvalidParameter("gamma must be positive (alpha = 1/gamma)")
    alpha = 1.0 / gamma
    b = (3 - 1j * alpha * complex(s)) / SQRT2
    disc = cmath.sqrt(b * b - 4)
    big = (b + disc) / 2 if abs(b + disc) >= abs(b - disc) else (b - disc) / 2
    degenerate = abs(disc) < 1e-12 * max(1.0, abs(b))
    if big == 0:
        raise InvalidParameter("quadratic has a vanishing root")
    small = 1 / big
    x0, x1 = small, big
    if abs(abs(x0) - abs(x1)) <= 1e-15 * abs(x1) and x1.real < x0.real:
        x0, x1 = x1, x0
    return QuadraticRoots(x0=x0, x1=x1, degenerate=degenerate)


def _scaled_parts(s: complex, n: int) -> tuple[complex, complex]:
    """Numerator and denominator of the transform, both divided by x1**n."""
    x0 = solve_quadratic(s).x0
    a = 1j * s + 1
    num = 1 - x0 ** (2 * n)
    den = a - SQRT2 * x0 - x0 ** (2 * n - 1) * (a * x0 - SQRT2)
    return num, den


def laplace_psi1(s: complex, n: int) -> complex:
    """Exact Laplace transform of the root amplitude at gamma = 1."""
    if n < 1:
        raise InvalidParameter("n must be >= 1")
    N = 2.0**n - 1
    num, den = _scaled_parts(complex(s), n)
    return 1j / math.sqrt(N) * num / den


def laplace_psi1_large_n(s: complex, n: int) -> complex:
    """Transform with x0**n dropped; only the 1/sqrt(N) prefactor depends on n."""
    N = 2.0**n - 1
    x0 = solve_quadratic(complex(s)).x0
    return 1j / math.sqrt(N) / ((1j * s + 1) - SQRT2 * x0)


def critical_poles(n: int) -> tuple[complex, complex]:
    """The two poles of the transform closest to s = 0 (gamma = 1).

    Both sit on the imaginary axis, where the denominator is real, so they
    are bracketed around +-i / sqrt(2^(n+1)) and found with brentq.
    """
    guess = 1.0 / math.sqrt(2.0 ** (n + 1))
    g = lambda mu: _scaled_parts(1j * mu, n)[1].real
    out = []
    for sign in (1, -1):
        lo, hi = sorted((sign * 0.25 * guess, sign * 4.0 * guess))
        mu = brentq(g, lo, hi, xtol=1e-16 * guess, rtol=4 * np.finfo(float).eps)
        out.append(1j * mu)
    return out[0], out[1]


def critical_residues(n: int) -> tuple[complex, complex]:
    N = 2.0**n - 1
    res = []
    for p in critical_poles(n):
        h = 1e-4 * abs(p)
        dg = (_scaled_parts(p + h, n)[1] - _scaled_parts(p - h, n)[1]) / (2 * h)
        res.append(1j / math.sqrt(N) * _scaled_parts(p, n)[0] / dg)
    return res[0], res[1]


def approx_small_gamma(t, gamma: float, N: int) -> np.ndarray:
    """Two-pole approximation of the root amplitude for gamma < 1."""
    if not 0 <= gamma < 1:
        raise InvalidParameter(f"small-gamma form needs 0 <= gamma < 1, got {gamma}")
    t = np.asarray(t, dtype=float)
    if gamma == 0:
        return np.exp(1j * t) / math.sqrt(N)
    a = 1.0 / gamma
    const = 1 / (1 - a)
    osc = (a * a + 2 * a - 1) / (a * a - 1)
    return (const + osc * np.exp(1j * (a - 1) / (a + 1) * t)) / math.sqrt(N)


def approx_critical(t, n: int, form: str = "sine") -> np.ndarray:
    """Root amplitude at gamma = 1 from the two poles near s = 0."""
    t = np.asarray(t, dtype=float)
    if form == "sine":
        return 1j / SQRT2 * np.sin(t / math.sqrt(2.0 ** (n + 1)))
    if form == "pair":
        (pp, pm), (rp, rm) = critical_poles(n), critical_residues(n)
        return rp * np.exp(pp * t) + rm * np.exp(pm * t)
    raise InvalidParameter(f"unknown form {form!r}")


def asymptotic_runtime(n: int) -> float:
    if n < 2:
        raise InvalidParameter("n must be >= 2")
    return math.pi * math.sqrt(2.0 ** (n + 1))


def small_gamma_efficiency(gamma: float, N: int) -> float:
    """t0 / p(t0) implied by the small-gamma approximation; linear in N."""
    if not 0 < gamma < 1:
        raise InvalidParameter(f"needs 0 < gamma < 1, got {gamma}")
    a = 1.0 / gamma
    return math.pi * (a + 1) ** 3 * (a - 1) / (a**2 * (a + 3) ** 2) * N
