"""Parameter sweeps, efficiency t0/p(t0) and scaling-exponent extraction."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidParameter, NoPeakFound
from .evolution import Propagator, envelope_peak, first_peak, max_probability
from .reduction import ReducedSystem, reduce
from .tree_core import TreeParams

MEASUREMENT_METHODS = ("envelope", "scan")


@dataclass(frozen=True)
class Measurement:
    t0: float | None
    p0: float | None
    linear_regime: bool
    method: str

    @property
    def efficiency(self) -> float | None:
        if self.t0 is None or not self.p0:
            return None
        return self.t0 / self.p0


def measure(system: ReducedSystem, method: str = "envelope", propagator: Propagator | None = None) -> Measurement:
    """Measurement time and success probability for one instance.

    ``linear_regime`` marks trivial oscillations: no qualifying peak, or no
    resonant pair of modes (opposite-sign weights of comparable size).
    """
    if method not in MEASUREMENT_METHODS:
        raise InvalidParameter(f"method must be one of {MEASUREMENT_METHODS}")
    prop = propagator or Propagator(system)
    try:
        peak = envelope_peak(system, prop) if method == "envelope" else first_peak(system, propagator=prop)
    except NoPeakFound:
        return Measurement(None, None, True, method)
    return Measurement(peak.t0, peak.p0, not prop.dominant_pair().resonant, method)


def efficiency(system: ReducedSystem, method: str = "envelope") -> float | None:
    return measure(system, method).efficiency


def gamma_star_rule(l: int, n: int) -> float:
    """Heuristic optimum used to centre sweep grids (never a result)."""
    if l == 1:
        return 1.0
    if l == 2:
        return 0.75
    if l == n:
        return 2.0
    return 2.0 / 3.0


def beta_prediction(l: int, n: int) -> float:
    if not 1 <= l <= n:
        raise InvalidParameter(f"need 1 <= l <= n, got l={l}, n={n}")
    return 0.5 + l / (2 * n)


# sweeps -------------------------------------------------------------------


@dataclass
class SweepPoint:
    gamma: float
    max_prob: float
    t0: float | None
    p0: float | None
    linear_regime: bool

    @property
    def efficiency(self) -> float | None:
        """t0 / p0, undefined for trivial (linear-regime) oscillations."""
        if self.linear_regime or self.t0 is None or not self.p0:
            return None
        return self.t0 / self.p0


@dataclass
class GammaSweep:
    n: int
    l: int
    points: list[SweepPoint]

    @property
    def grid(self) -> np.ndarray:
        return np.array([p.gamma for p in self.points])

    @property
    def gamma_prime_star(self) -> float:
        best = max(self.points, key=lambda p: p.max_prob)
        return best.gamma

    @property
    def p_max(self) -> float:
        return max(p.max_prob for p in self.points)

    @property
    def gamma_star(self) -> float | None:
        valid = [p for p in self.points if p.efficiency is not None]
        return min(valid, key=lambda p: p.efficiency).gamma if valid else None


def sweep_point(job: tuple[int, int, float, str]) -> SweepPoint:
    n, l, gamma, method = job
    system = reduce(TreeParams(n, l, gamma))
    prop = Propagator(system)
    m = measure(system, method, prop)
    mp = max_probability(system, propagator=prop)
    return SweepPoint(gamma=gamma, max_prob=mp.p0, t0=m.t0, p0=m.p0, linear_regime=m.linear_regime)


def run_jobs(func, jobs: list, workers: int = 1) -> list:
    """Evaluate ``func`` over ``jobs``; results keep job order for any worker count."""
    if workers <= 1 or len(jobs) <= 1:
        return [func(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, jobs))


def _grid(lo: float, hi: float, step: float) -> list[float]:
    k0, k1 = math.ceil(lo / step - 1e-9), math.floor(hi / step + 1e-9)
    return [round(k * step, 10) for k in range(max(k0, 1), k1 + 1)]


def sweep_gamma(
    n: int,
    l: int,
    gamma_max: float = 3.0,
    coarse: float = 0.05,
    fine: float = 0.005,
    method: str = "envelope",
    workers: int = 1,
) -> GammaSweep:
    """Coarse grid over (0, gamma_max], then a fine grid around both optima."""
    TreeParams(n, l)
    done: dict[float, SweepPoint] = {}

    def evaluate(gammas):
        todo = sorted({g for g in gammas if g not in done and 0 < g <= gamma_max + 1e-12})
        for p in run_jobs(sweep_point, [(n, l, g, method) for g in todo], workers):
            done[p.gamma] = p

    evaluate(_grid(coarse, gamma_max, coarse))
    coarse_sweep = GammaSweep(n, l, [done[g] for g in sorted(done)])
    centres = [coarse_sweep.gamma_prime_star]
    if coarse_sweep.gamma_star is not None:
        centres.append(coarse_sweep.gamma_star)
    for c in centres:
        evaluate(_grid(max(fine, c - coarse), c + coarse, fine))
    return GammaSweep(n, l, [done[g] for g in sorted(done)])


# scaling ------------------------------------------------------------------


@dataclass
class ScalingPoint:
    n: int
    l: int
    gamma: float
    t0: float | None
    p0: float | None
    linear_regime: bool

    @property
    def N(self) -> int:
        return 2**self.n - 1

    @property
    def metric(self) -> float | None:
        return self.t0 / self.p0 if self.t0 is not None and self.p0 else None


@dataclass
class ScalingFit:
    points: list[ScalingPoint]
    beta: float
    beta_stderr: float
    slope_sizes: np.ndarray = field(repr=False)
    local_slopes: np.ndarray = field(repr=False)
    fit_min_n: int = 0

    @property
    def included(self) -> list[ScalingPoint]:
        return [p for p in self.points if not p.linear_regime and p.metric is not None]

    @property
    def excluded(self) -> list[int]:
        return [p.n for p in self.points if p.linear_regime or p.metric is None]


def local_slopes(ns, Ns, metrics) -> tuple[np.ndarray, np.ndarray]:
    """d log(metric) / d log(N) between consecutive sizes, at the midpoint depth."""
    ns, Ns, metrics = (np.asarray(x, dtype=float) for x in (ns, Ns, metrics))
    slopes = np.diff(np.log(metrics)) / np.diff(np.log(Ns))
    return 0.5 * (ns[1:] + ns[:-1]), slopes


def extrapolate(mid_n: np.ndarray, slopes: np.ndarray) -> tuple[float, float]:
    """Intercept (and its standard error) of a straight line slope ~ beta + a / n."""
    x = 1.0 / np.asarray(mid_n, dtype=float)
    y = np.asarray(slopes, dtype=float)
    if x.size < 2:
        raise InvalidParameter("need at least two local slopes to extrapolate")
    A = np.column_stack([np.ones_like(x), x])
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    dof = x.size - 2
    if dof > 0:
        resid = y - A @ coef
        cov = (resid @ resid / dof) * np.linalg.inv(A.T @ A)
        err = float(np.sqrt(cov[0, 0]))
    else:
        err = float("nan")
    return float(coef[0]), err


def level_for(n: int, level_policy) -> int:
    """``level_policy`` is an int (fixed level) or a float ratio rho with l = rho * n."""
    if isinstance(level_policy, int):
        return level_policy
    return max(1, min(n, int(round(level_policy * n))))


def scaling_point(job: tuple[int, int, float, str]) -> ScalingPoint:
    n, l, gamma, method = job
    m = measure(reduce(TreeParams(n, l, gamma)), method)
    return ScalingPoint(n=n, l=l, gamma=gamma, t0=m.t0, p0=m.p0, linear_regime=m.linear_regime)


def fit_scaling(points: list[ScalingPoint], fit_min_n: int = 24) -> ScalingFit:
    """Local log-log slopes between included sizes, extrapolated in 1/n.

    Only slopes whose smaller size is at least ``fit_min_n`` enter the line
    fit; the smallest trees carry pre-asymptotic corrections that are not
    polynomial in 1/n.
    """
    good = [p for p in points if not p.linear_regime and p.metric is not None]
    if len(good) < 3:
        raise InvalidParameter("need at least three usable sizes")
    mid, slopes = local_slopes([p.n for p in good], [p.N for p in good], [p.metric for p in good])
    lower = np.array([p.n for p in good[:-1]])
    use = lower >= fit_min_n
    if use.sum() < 2:
        use = np.ones_like(use, dtype=bool)
    beta, err = extrapolate(mid[use], slopes[use])
    return ScalingFit(points=points, beta=beta, beta_stderr=err, slope_sizes=mid, local_slopes=slopes, fit_min_n=fit_min_n)


def scaling_experiment(
    sizes,
    level_policy,
    gamma: float | None = None,
    method: str = "envelope",
    fit_min_n: int = 24,
    workers: int = 1,
) -> ScalingFit:
    """Measure t0/p(t0) over ``sizes`` and extract the exponent beta."""
    sizes = sorted(int(n) for n in sizes)
    if len(sizes) < 4:
        raise InvalidParameter("scaling needs at least four sizes")
    jobs = []
    for n in sizes:
        l = level_for(n, level_policy)
        g = gamma_star_rule(l, n) if gamma is None else gamma
        jobs.append((n, l, g, method))
    points = run_jobs(scaling_point, jobs, workers)
    return fit_scaling(points, fit_min_n)
