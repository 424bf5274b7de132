"""Spectral time evolution of reduced systems and peak location.

The propagator is e^{-itH}; with H = sum_k lam_k |v_k><v_k| the marked-site
amplitude is sum_k c_k exp(-i lam_k t) with c_k = <w|v_k><v_k|s>.  One
decomposition serves every query time, which matters when times reach 1e10.
"""

from __future__ import annotations

import csv
import hashlib
import io
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.linalg
from scipy.optimize import minimize_scalar

from .errors import InvalidParameter, NoPeakFound, NumericalFailure
from .reduction import ReducedSystem

SCAN_POINTS_PER_PERIOD = 64
FALLBACK_DIVISIONS = 4096
PEAK_THRESHOLD = 1.5
MAX_DOUBLINGS = 10
MAX_SCAN_SAMPLES = 2**22
# dominant pair counts as a search resonance only if the weights are within this ratio
RESONANCE_WEIGHT_RATIO = 2.0
_CHUNK = 4096


@dataclass(frozen=True)
class SpectralDecomposition:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # columns

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.T


def fingerprint(H: np.ndarray) -> str:
    return hashlib.sha1(np.ascontiguousarray(H, dtype=float).tobytes()).hexdigest()[:12]


def decompose(H: np.ndarray) -> SpectralDecomposition:
    H = np.asarray(H, dtype=float)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise InvalidParameter(f"expected a square matrix, got shape {H.shape}")
    scale = max(1.0, float(np.abs(H).max(initial=0.0)))
    if np.abs(H - H.T).max(initial=0.0) > 1e-12 * scale:
        raise InvalidParameter("matrix is not symmetric")
    try:
        lam, vec = scipy.linalg.eigh(H, check_finite=True)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise NumericalFailure(f"symmetric eigensolver failed: {exc}", fingerprint(H)) from exc
    return SpectralDecomposition(eigenvalues=lam, eigenvectors=vec)


@dataclass(frozen=True)
class Peak:
    t0: float
    p0: float

    @property
    def efficiency(self) -> float:
        return self.t0 / self.p0


@dataclass(frozen=True)
class DominantPair:
    """The two eigenmodes carrying the largest marked-site weights."""

    indices: tuple[int, int]
    eigenvalues: tuple[float, float]
    weights: tuple[float, float]

    @property
    def gap(self) -> float:
        return abs(self.eigenvalues[0] - self.eigenvalues[1])

    @property
    def period(self) -> float:
        """Period of the two-mode beat in the success probability."""
        if self.gap == 0.0 or self.weights[1] == 0.0:
            return np.inf
        return 2 * np.pi / self.gap

    @property
    def resonant(self) -> bool:
        a, b = self.weights
        return a * b < 0 and abs(a) <= RESONANCE_WEIGHT_RATIO * abs(b)


@dataclass(frozen=True)
class EvolutionTrace:
    times: np.ndarray
    amplitude: np.ndarray

    @property
    def probability(self) -> np.ndarray:
        return np.abs(self.amplitude) ** 2

    def to_csv(self, header: str = "") -> str:
        buf = io.StringIO()
        buf.write(header)
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["t", "re_amp", "im_amp", "prob"])
        for t, a, p in zip(self.times, self.amplitude, self.probability):
            writer.writerow([f"{t:.15g}", f"{a.real:.15g}", f"{a.imag:.15g}", f"{p:.15g}"])
        return buf.getvalue()


class Propagator:
    """Exact evolution of one reduced system from its uniform initial state."""

    def __init__(self, system: ReducedSystem, decomposition: SpectralDecomposition | None = None):
        self.system = system
        self.decomposition = decomposition or decompose(system.hamiltonian)

    @cached_property
    def weights(self) -> np.ndarray:
        vec = self.decomposition.eigenvectors
        return vec[self.system.marked_index] * (vec.T @ self.system.initial_state)

    @property
    def eigenvalues(self) -> np.ndarray:
        return self.decomposition.eigenvalues

    @property
    def baseline(self) -> float:
        return float(self.system.initial_state[self.system.marked_index] ** 2)

    def amplitude(self, times) -> np.ndarray:
        t = np.atleast_1d(np.asarray(times, dtype=float))
        out = np.empty(t.shape, dtype=complex)
        flat = t.ravel()
        res = out.reshape(-1)
        step = max(1, _CHUNK * 256 // max(1, len(self.eigenvalues)))
        for s in range(0, flat.size, step):
            res[s : s + step] = np.exp(-1j * np.outer(flat[s : s + step], self.eigenvalues)) @ self.weights
        return out

    def probability(self, times) -> np.ndarray:
        return np.abs(self.amplitude(times)) ** 2

    def state(self, t: float) -> np.ndarray:
        vec = self.decomposition.eigenvectors
        coeff = vec.T @ self.system.initial_state
        return vec @ (np.exp(-1j * self.eigenvalues * t) * coeff)

    def dominant_pair(self) -> DominantPair:
        order = np.argsort(-np.abs(self.weights), kind="stable")
        a = int(order[0])
        b = int(order[1]) if len(order) > 1 else a
        wb = float(self.weights[b]) if b != a else 0.0
        return DominantPair(
            indices=(a, b),
            eigenvalues=(float(self.eigenvalues[a]), float(self.eigenvalues[b])),
            weights=(float(self.weights[a]), wb),
        )

    def active_modes(self) -> int:
        w = np.abs(self.weights)
        return int(np.count_nonzero(w > 1e-14 * w.max()))


def evolve_amplitude(system: ReducedSystem, times, propagator: Propagator | None = None) -> EvolutionTrace:
    t = np.asarray(times, dtype=float).ravel()
    if t.size == 0:
        raise InvalidParameter("time grid is empty")
    prop = propagator or Propagator(system)
    return EvolutionTrace(times=t, amplitude=prop.amplitude(t))


def default_horizon(system: ReducedSystem) -> float:
    n, l = system.params.n, system.params.l
    return 8.0 * float(system.N) ** (0.5 + l / (2 * n))


def _scan_step(prop: Propagator, horizon: float) -> float:
    period = prop.dominant_pair().period
    if np.isfinite(period):
        return period / SCAN_POINTS_PER_PERIOD
    return horizon / FALLBACK_DIVISIONS


def _refine(f, a: float, b: float, c: float, rtol: float) -> float:
    res = minimize_scalar(lambda x: -f(x), bracket=(a, b, c), method="golden", tol=rtol)
    x = float(res.x)
    return x if a <= x <= c and f(x) >= f(b) else b


def first_peak(
    system: ReducedSystem,
    horizon: float | None = None,
    threshold: float = PEAK_THRESHOLD,
    max_doublings: int = MAX_DOUBLINGS,
    rtol: float = 1e-6,
    propagator: Propagator | None = None,
) -> Peak:
    """First local maximum of p(t) that reaches ``threshold`` times p(0).

    Coarse scan at 1/64 of the dominant beat period, then golden-section
    refinement on the bracketing samples.  The horizon doubles up to
    ``max_doublings`` times before giving up.
    """
    prop = propagator or Propagator(system)
    if prop.active_modes() <= 1:
        raise NoPeakFound("|amplitude| is constant: a single mode overlaps the marked site")
    horizon = default_horizon(system) if horizon is None else float(horizon)
    step = _scan_step(prop, horizon)
    level = threshold * prop.baseline
    f = lambda x: float(prop.probability(x)[0])

    limit = horizon * 2**max_doublings
    t_prev2, p_prev2 = None, None
    t_prev, p_prev = 0.0, prop.baseline
    i = 0
    while i * step < limit and i < MAX_SCAN_SAMPLES:
        ts = step * np.arange(i + 1, i + 1 + _CHUNK)
        ps = prop.probability(ts)
        tt = np.concatenate([[t_prev2, t_prev] if t_prev2 is not None else [t_prev], ts])
        pp = np.concatenate([[p_prev2, p_prev] if p_prev2 is not None else [p_prev], ps])
        is_max = (pp[1:-1] >= pp[:-2]) & (pp[1:-1] > pp[2:]) & (pp[1:-1] >= level)
        hits = np.flatnonzero(is_max)
        if hits.size:
            k = hits[0] + 1
            t0 = _refine(f, tt[k - 1], tt[k], tt[k + 1], rtol)
            return Peak(t0=t0, p0=f(t0))
        t_prev2, p_prev2, t_prev, p_prev = ts[-2], ps[-2], ts[-1], ps[-1]
        i += _CHUNK
    raise NoPeakFound(f"no local maximum above {threshold} x baseline before t = {i * step:.6g}")


def envelope_peak(system: ReducedSystem, propagator: Propagator | None = None) -> Peak:
    """Measurement at the first maximum of the dominant two-mode beat.

    t0 = pi / |lam_a - lam_b| for the two modes with the largest marked-site
    weights; p0 is the exact probability there.  Unlike :func:`first_peak`
    this ignores the small fast ripple from the remaining modes, which
    otherwise jitters t0 by several percent between system sizes.
    """
    prop = propagator or Propagator(system)
    pair = prop.dominant_pair()
    if not np.isfinite(pair.period):
        raise NoPeakFound("no second mode overlaps the marked site")
    t0 = np.pi / pair.gap
    return Peak(t0=t0, p0=float(prop.probability(t0)[0]))


def max_probability(
    system: ReducedSystem,
    horizon: float | None = None,
    cycles: float = 4.0,
    propagator: Propagator | None = None,
) -> Peak:
    """Largest p(t) over [0, min(horizon, cycles * beat period)]."""
    prop = propagator or Propagator(system)
    horizon = default_horizon(system) if horizon is None else float(horizon)
    period = prop.dominant_pair().period
    window = min(horizon, cycles * period) if np.isfinite(period) else horizon
    step = period / SCAN_POINTS_PER_PERIOD if np.isfinite(period) else horizon / FALLBACK_DIVISIONS
    ts = step * np.arange(0, int(np.ceil(window / step)) + 2)
    ps = prop.probability(ts)
    k = int(np.argmax(ps))
    if 0 < k < len(ts) - 1:
        f = lambda x: float(prop.probability(x)[0])
        t = _refine(f, ts[k - 1], ts[k], ts[k + 1], 1e-8)
        return Peak(t0=t, p0=f(t))
    return Peak(t0=float(ts[k]), p0=float(ps[k]))
