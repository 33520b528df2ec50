"""Bounded derivative-free least squares and the Lorentzian-with-floor line model.

The optimizer works on the unit box: every free parameter is mapped to
[0, 1] through its bounds, so the simplex geometry does not depend on
parameter units. Parameters with equal lower and upper bounds are pinned
and never handed to the simplex.
"""

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.optimize import minimize as _nelder_mead

from .core import db_power, from_db

# initial step, then shrunken restarts from the best point
_SIMPLEX_STEPS = (0.1, 0.03, 0.01, 0.003)
# objective reduction counted as an exact fit (rounding level)
_EXACT = 1e-28


@dataclass
class FitProblem:
    residual_fn: Callable[[np.ndarray], np.ndarray]
    initial: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    max_evals: int = 20000
    tolerance: float = 1e-12
    names: Optional[Sequence[str]] = None
    xtol: float = 1e-10  # simplex size on the unit box
    abs_tolerance: float = 0.0  # sum of squares treated as an exact fit

    def __post_init__(self):
        self.initial = np.asarray(self.initial, dtype=float)
        self.lower = np.asarray(self.lower, dtype=float)
        self.upper = np.asarray(self.upper, dtype=float)
        if not (self.initial.shape == self.lower.shape == self.upper.shape):
            raise ValueError("initial, lower and upper must have the same shape")
        if np.any(self.lower > self.upper):
            raise ValueError("bounds are not ordered (lower > upper)")
        if np.any(self.initial < self.lower) or np.any(self.initial > self.upper):
            raise ValueError("initial point lies outside the bounds")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if self.abs_tolerance < 0:
            raise ValueError("abs_tolerance must be non-negative")
        if self.names is not None and len(self.names) != self.initial.size:
            raise ValueError("names must match the parameter count")


@dataclass
class FitResult:
    params: np.ndarray
    sum_sq: float
    n_evals: int
    converged: bool
    uncertainties: Optional[np.ndarray] = None
    names: Optional[Sequence[str]] = None
    message: str = ""
    info: dict = field(default_factory=dict)

    def as_dict(self):
        if self.names is None:
            raise ValueError("result carries no parameter names")
        return dict(zip(self.names, (float(p) for p in self.params)))

    def __getitem__(self, name):
        return self.as_dict()[name]


def _unit_simplex(u0, step):
    n = u0.size
    sim = np.empty((n + 1, n))
    sim[0] = u0
    for i in range(n):
        v = u0.copy()
        # step inward when the outward vertex would leave the box
        v[i] = u0[i] + step if u0[i] + step <= 1.0 else u0[i] - step
        sim[i + 1] = v
    return sim


def rounding_level(n_points, scale=1.0):
    """Sum of squares for a per-point rms of 1e-12 * scale, counted as an exact fit."""
    return n_points * (1e-12 * scale) ** 2


class _ExactFit(Exception):
    pass


def minimize(problem: FitProblem) -> FitResult:
    """Minimize sum(residual_fn(p)**2) inside the box bounds.

    Runs a Nelder-Mead simplex in normalized coordinates, then up to three
    restarts from the best point with progressively smaller simplices. The
    fit counts as converged once a restart improves the objective by less
    than ``tolerance`` (relative), or as soon as the objective drops to
    ``abs_tolerance``. Exhausting ``max_evals`` first returns the best point
    with ``converged=False``.
    """
    lo, hi = problem.lower, problem.upper
    free = hi > lo
    width = np.where(free, hi - lo, 1.0)
    n_evals = 0
    exact_level = -1.0
    best_seen = [np.inf, None]

    def to_params(u):
        p = problem.initial.copy()
        p[free] = np.clip(lo[free] + np.clip(u, 0.0, 1.0) * width[free], lo[free], hi[free])
        return p

    def objective(u):
        nonlocal n_evals
        n_evals += 1
        r = np.asarray(problem.residual_fn(to_params(u)), dtype=float)
        val = float(np.dot(r.ravel(), r.ravel()))
        if not np.isfinite(val):
            return np.inf
        if val < best_seen[0]:
            best_seen[0], best_seen[1] = val, np.array(u, dtype=float)
        if val <= exact_level:
            raise _ExactFit
        return val

    u = (problem.initial[free] - lo[free]) / width[free]
    best = objective(u)
    exact_level = max(_EXACT * best, problem.abs_tolerance)
    if best <= exact_level:
        return FitResult(problem.initial.copy(), best, n_evals, True, names=problem.names, message="exact fit")
    if not free.any():
        return FitResult(problem.initial.copy(), best, n_evals, True, names=problem.names,
                         message="all parameters pinned")

    converged = False
    message = "restart schedule ended before the tolerance was met"
    bounds = [(0.0, 1.0)] * u.size
    for k, step in enumerate(_SIMPLEX_STEPS):
        budget = problem.max_evals - n_evals
        if budget <= u.size + 1:
            message = "evaluation budget exhausted"
            break
        try:
            _nelder_mead(
                objective, u, method="Nelder-Mead", bounds=bounds,
                options=dict(maxfev=budget, xatol=problem.xtol, fatol=max(problem.tolerance * best, problem.abs_tolerance),
                             initial_simplex=_unit_simplex(u, step), adaptive=u.size > 4),
            )
        except _ExactFit:
            u, best = np.clip(best_seen[1], 0.0, 1.0), best_seen[0]
            converged, message = True, "exact fit"
            break
        improvement = best - best_seen[0]
        if best_seen[1] is not None and best_seen[0] <= best:
            u, best = np.clip(best_seen[1], 0.0, 1.0), best_seen[0]
        if k > 0 and improvement <= problem.tolerance * best:
            converged, message = True, "converged"
            break
    if not converged and n_evals >= problem.max_evals:
        message = "evaluation budget exhausted"

    return FitResult(to_params(u), best, n_evals, converged, names=problem.names, message=message)


def estimate_uncertainties(residual_fn, params, lower, upper, rel_step=1e-6):
    """Indicative 1-sigma errors from a finite-difference Gauss-Newton Hessian.

    Pinned parameters get zero uncertainty. Returns NaN where the normal
    matrix is singular.
    """
    p = np.asarray(params, dtype=float)
    lower, upper = np.asarray(lower, float), np.asarray(upper, float)
    r0 = np.asarray(residual_fn(p), dtype=float).ravel()
    free = np.flatnonzero(upper > lower)
    J = np.empty((r0.size, free.size))
    for col, i in enumerate(free):
        dp = rel_step * max(abs(p[i]), (upper[i] - lower[i]) * 1e-3)
        hi_p, lo_p = p.copy(), p.copy()
        hi_p[i] = min(p[i] + dp, upper[i])
        lo_p[i] = max(p[i] - dp, lower[i])
        J[:, col] = (np.asarray(residual_fn(hi_p)).ravel() - np.asarray(residual_fn(lo_p)).ravel()) / (hi_p[i] - lo_p[i])
    dof = max(r0.size - free.size, 1)
    s2 = float(r0 @ r0) / dof
    sigma = np.zeros_like(p)
    try:
        cov = np.linalg.inv(J.T @ J) * s2
        sigma[free] = np.sqrt(np.abs(np.diag(cov)))
    except np.linalg.LinAlgError:
        sigma[free] = np.nan
    return sigma


@dataclass
class LorentzianFloorModel:
    center: float
    fwhm: float
    peak: float
    floor: float

    def __post_init__(self):
        if not self.fwhm > 0:
            raise ValueError("fwhm must be positive")
        if not self.peak >= self.floor >= 0:
            raise ValueError("need peak >= floor >= 0")


def lorentzian_floor(x, model: LorentzianFloorModel):
    """Additive-floor Lorentzian in linear power units."""
    x = np.asarray(x, dtype=float)
    hw2 = (0.5 * model.fwhm) ** 2
    return model.floor + (model.peak - model.floor) * hw2 / ((x - model.center) ** 2 + hw2)


def _lorentzian_raw(x, center, fwhm, peak, floor):
    hw2 = (0.5 * fwhm) ** 2
    return floor + (peak - floor) * hw2 / ((x - center) ** 2 + hw2)


SWEEP_PARAMS = ("center", "fwhm", "peak", "floor")


def fit_sweep(x, efficiency_db, significance=5.0, max_evals=20000):
    """Fit a Lorentzian-with-floor to an efficiency sweep given in dB.

    The model is built in linear power (normalized by the data maximum)
    and compared to the data in dB, since spectrum-analyzer noise is close
    to Gaussian on the log scale. Returned parameters are linear (peak,
    floor) and in x units (center, fwhm); ``info`` carries dB versions, the
    rms residual in dB and a detection statistic: the square root of the
    sum-of-squares reduction against a flat floor, in units of the residual
    rms. The line counts as significant when it exceeds ``significance``;
    pure-noise sweeps of a few hundred points stay below about 4.5.
    """
    x = np.asarray(x, dtype=float)
    y_db = np.asarray(efficiency_db, dtype=float)
    if x.size < 5 or x.size != y_db.size:
        raise ValueError("fit_sweep needs at least 5 (x, efficiency_db) pairs")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y_db))):
        raise ValueError("sweep data must be finite")
    order = np.argsort(x, kind="stable")
    x, y_db = x[order], y_db[order]
    ref_db = float(np.max(y_db))
    yn_db = y_db - ref_db
    yn = from_db(yn_db)
    scale = from_db(ref_db)
    span = float(x[-1] - x[0])
    names = list(SWEEP_PARAMS)
    if np.ptp(y_db) == 0.0:
        params = np.array([x[np.argmax(y_db)], span, scale, scale])
        return FitResult(params, 0.0, 0, False, names=names, message="degenerate (constant) data",
                         info=dict(significant=False, peak_db=ref_db, floor_db=ref_db, rms_db=0.0, detection=0.0))

    dx = float(np.min(np.diff(x)))
    floor0 = float(np.median(np.sort(yn)[: max(3, yn.size // 5)]))
    above = yn > 0.5 * (1.0 + floor0)
    fwhm0 = max(float(np.sum(above)) * span / (x.size - 1), 2 * dx)
    tiny = 1e-12
    lower = np.array([x[0], 0.5 * dx, tiny, tiny])
    upper = np.array([x[-1], 4.0 * span, 2.0, 1.0])
    initial = np.clip(np.array([x[int(np.argmax(yn))], fwhm0, 1.0, floor0]), lower, upper)

    def residual(p):
        c0, w, pk, fl = p
        return 10.0 * np.log10(_lorentzian_raw(x, c0, w, max(pk, fl), fl)) - yn_db

    res = minimize(FitProblem(residual, initial, lower, upper, max_evals=max_evals, names=names,
                              abs_tolerance=rounding_level(x.size, 10.0)))
    c0, w, pk, fl = res.params
    pk = max(pk, fl)
    res.params = np.array([c0, w, pk * scale, fl * scale])
    rms_db = float(np.sqrt(res.sum_sq / max(x.size - 4, 1)))
    peak_db, floor_db = db_power(pk) + ref_db, db_power(fl) + ref_db
    flat_sq = float(np.sum((yn_db - yn_db.mean()) ** 2))
    detection = np.sqrt(max(flat_sq - res.sum_sq, 0.0)) / rms_db if rms_db > 0 else np.inf
    res.info = dict(peak_db=peak_db, floor_db=floor_db, rms_db=rms_db, detection=float(detection),
                    significant=bool(detection > significance))
    return res


def sweep_model_db(x, result: FitResult):
    """dB curve of a fitted sweep model."""
    c0, w, pk, fl = result.params
    return db_power(_lorentzian_raw(np.asarray(x, float), c0, w, pk, fl))
