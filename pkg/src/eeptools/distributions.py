"""Exponentiated exponential EE(alpha, beta) and EEP(alpha, beta, lambda) laws.

With y = 1 - exp(-beta x), the EEP distribution function is

    F(x) = (1 - exp(-lambda y**alpha)) / (1 - exp(-lambda)),   x > 0,

and EE is the lambda -> 0 limit, F(x) = y**alpha.  All evaluators accept
scalars or arrays and return the same shape.  Everything is written with
``expm1``/``log1p`` so both tails keep full relative accuracy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .base import DomainError
from .rng import make_generator, open_uniform


def _check_positive(**kw):
    for name, v in kw.items():
        if not (isinstance(v, (int, float, np.floating, np.integer)) and math.isfinite(v) and v > 0):
            raise DomainError(f"{name} must be a positive finite number, got {v!r}")


@dataclass(frozen=True)
class EepParams:
    """Parameter triple (alpha, beta, lambda) of EEP; ``lam`` is lambda."""

    alpha: float
    beta: float
    lam: float

    def __post_init__(self):
        _check_positive(alpha=self.alpha, beta=self.beta, lam=self.lam)
        for name in ("alpha", "beta", "lam"):
            object.__setattr__(self, name, float(getattr(self, name)))

    @property
    def ee(self) -> "EeParams":
        return EeParams(self.alpha, self.beta)


@dataclass(frozen=True)
class EeParams:
    alpha: float
    beta: float

    def __post_init__(self):
        _check_positive(alpha=self.alpha, beta=self.beta)
        for name in ("alpha", "beta"):
            object.__setattr__(self, name, float(getattr(self, name)))


@dataclass(frozen=True)
class SampleBatch:
    """Lifetimes together with the key that reproduces them."""

    values: np.ndarray
    seed: int
    stream_id: int

    def __len__(self):
        return len(self.values)


def _out(x_in, arr):
    return float(arr) if np.ndim(x_in) == 0 else arr


def _norm(lam: float) -> float:
    return -math.expm1(-lam)  # 1 - exp(-lambda)


def _log1mexp(v):
    """log(1 - exp(v)) for v <= 0, accurate at both ends."""
    v = np.asarray(v, dtype=float)
    with np.errstate(divide="ignore"):
        near = np.log(-np.expm1(np.where(v > -math.log(2.0), v, -1.0)))
        far = np.log1p(-np.exp(np.minimum(v, 0.0)))
    return np.where(v > -math.log(2.0), near, far)


# ---------------------------------------------------------------------------
# EE(alpha, beta)
# ---------------------------------------------------------------------------

def ee_cdf(p: EeParams, x):
    xa = np.asarray(x, dtype=float)
    pos = xa > 0
    y = -np.expm1(-p.beta * np.where(pos, xa, 0.0))
    out = np.where(pos, y ** p.alpha, 0.0)
    return _out(x, out)


def ee_pdf(p: EeParams, x):
    xa = np.asarray(x, dtype=float)
    pos = xa > 0
    xs = np.where(pos, xa, 1.0)
    y = -np.expm1(-p.beta * xs)
    with np.errstate(divide="ignore"):
        logf = math.log(p.alpha * p.beta) - p.beta * xs + (p.alpha - 1.0) * np.log(y)
    out = np.where(pos, np.exp(logf), 0.0)
    out = np.where(xa == 0, _density_at_zero(p.alpha, p.alpha * p.beta), out)
    return _out(x, out)


def _density_at_zero(alpha: float, slope: float) -> float:
    if alpha < 1:
        return math.inf
    if alpha == 1:
        return slope
    return 0.0


# ---------------------------------------------------------------------------
# EEP(alpha, beta, lambda)
# ---------------------------------------------------------------------------

def eep_cdf(p: EepParams, x):
    """Distribution function; 0 for x <= 0."""
    xa = np.asarray(x, dtype=float)
    pos = xa > 0
    y = -np.expm1(-p.beta * np.where(pos, xa, 0.0))
    out = -np.expm1(-p.lam * y ** p.alpha) / _norm(p.lam)
    out = np.where(pos, out, 0.0)
    return _out(x, out)


def eep_logpdf(p: EepParams, x):
    xa = np.asarray(x, dtype=float)
    pos = xa > 0
    xs = np.where(pos, xa, 1.0)
    y = -np.expm1(-p.beta * xs)
    with np.errstate(divide="ignore"):
        logf = (math.log(p.alpha * p.beta * p.lam) - math.log(_norm(p.lam)) - p.beta * xs
                + (p.alpha - 1.0) * np.log(y) - p.lam * y ** p.alpha)
    out = np.where(pos, logf, -np.inf)
    at0 = _density_at_zero(p.alpha, p.alpha * p.beta * p.lam / _norm(p.lam))
    out = np.where(xa == 0, math.log(at0) if at0 > 0 else -np.inf, out)
    return _out(x, out)


def eep_pdf(p: EepParams, x):
    """Density.  For alpha < 1 the density at x = 0 is reported as +inf."""
    xa = np.asarray(x, dtype=float)
    with np.errstate(over="ignore"):
        out = np.exp(np.asarray(eep_logpdf(p, xa)))
    return _out(x, out)


def _log_one_minus_y_alpha(p: EepParams, xs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """log(1 - y**alpha) with y = 1 - exp(-beta x), accurate for large x.

    Also returns that logarithm plus ``beta x``, which stays O(1) in the far
    tail and lets the hazard avoid subtracting two huge logarithms.
    """
    q = -p.beta * xs  # log(1 - y)
    direct = _log1mexp(p.alpha * _log1mexp(q))
    # deep tail: 1 - y**alpha = alpha e^q (1 - (alpha-1) e^q / 2 + ...)
    deep = q < -30.0
    eq = np.where(deep, np.exp(q), 0.0)
    with np.errstate(invalid="ignore"):
        shifted = np.where(deep, math.log(p.alpha) + np.log1p(-(p.alpha - 1.0) * eq / 2.0), direct - q)
    return np.where(deep, q + shifted, direct), shifted


def _log_expm1_ratio(v: np.ndarray) -> np.ndarray:
    """log(expm1(v) / v) for v >= 0."""
    with np.errstate(divide="ignore", invalid="ignore"):
        big = np.log(np.expm1(np.maximum(v, 1e-300))) - np.log(np.maximum(v, 1e-300))
    return np.where(v < 1e-8, np.log1p(v / 2.0 + v * v / 6.0), big)


def _log_survival(p: EepParams, xs: np.ndarray) -> np.ndarray:
    lg, _ = _log_one_minus_y_alpha(p, xs)
    lam_g = p.lam * np.exp(lg)
    # S = e^-lam expm1(lam g) / (1 - e^-lam)
    return -p.lam + math.log(p.lam) + lg + _log_expm1_ratio(lam_g) - math.log(_norm(p.lam))


def eep_survival(p: EepParams, x):
    """1 - F(x), computed as (exp(-lambda y**alpha) - exp(-lambda)) / (1 - exp(-lambda))."""
    xa = np.asarray(x, dtype=float)
    pos = xa > 0
    xs = np.where(pos, xa, 1.0)
    out = np.where(pos, np.exp(_log_survival(p, xs)), 1.0)
    out = np.where(np.isposinf(xa), 0.0, out)
    return _out(x, out)


def eep_hazard(p: EepParams, x, return_flag: bool = False):
    """Hazard rate f/S, evaluated as exp(log f - log S).

    The ratio tends to ``beta`` as x grows.  Where the density or survival
    underflows even in log form (infinite x) the asymptote ``beta`` is
    returned; with ``return_flag=True`` a boolean array marking those points is
    returned alongside.
    """
    xa = np.asarray(x, dtype=float)
    if np.any(xa <= 0):
        raise DomainError("hazard is defined for x > 0")
    finite = np.isfinite(xa)
    xs = np.where(finite, xa, 1.0)
    lg, shifted = _log_one_minus_y_alpha(p, xs)
    lam_g = p.lam * np.exp(lg)
    y = -np.expm1(-p.beta * xs)
    # log f - log S with the -beta x terms cancelled by hand
    log_h = (math.log(p.alpha * p.beta) + (p.alpha - 1.0) * np.log(y) + lam_g
             - shifted - _log_expm1_ratio(lam_g))
    h = np.exp(log_h)
    flag = ~finite | ~np.isfinite(h)
    h = np.where(flag, p.beta, h)
    h = _out(x, h)
    if return_flag:
        return h, (bool(flag) if np.ndim(x) == 0 else flag)
    return h


def eep_quantile(p: EepParams, u):
    """Closed-form inverse of :func:`eep_cdf` for 0 <= u <= 1 (u = 1 gives inf).

    The lower half inverts for y**alpha directly; the upper half inverts for
    1 - y**alpha, which keeps full relative accuracy as u approaches 1.
    """
    ua = np.asarray(u, dtype=float)
    if np.any(~((ua >= 0) & (ua <= 1))):
        raise DomainError("quantile needs 0 <= u <= 1")
    with np.errstate(divide="ignore"):
        y_alpha = -np.log1p(-ua * _norm(p.lam)) / p.lam
        lower = y_alpha <= 0.5
        x_low = -np.log1p(-y_alpha ** (1.0 / p.alpha)) / p.beta
        # 1 - y**alpha = log(1 + (1-u)(e^lam - 1)) / lam
        log_em1 = p.lam + math.log(_norm(p.lam))
        w = np.minimum(np.logaddexp(np.log1p(-np.where(lower, 0.0, ua)) + log_em1, 0.0) / p.lam, 1.0)
        x_up = -_log1mexp(np.log1p(-w) / p.alpha) / p.beta
    out = np.where(lower, x_low, x_up)
    out = np.where(ua == 1.0, np.inf, out)
    return _out(u, out)


def eep_sample(p: EepParams, n: int, seed: int, stream_id: int = 0) -> SampleBatch:
    """``n`` draws by inverse transform from the ``(seed, stream_id)`` stream."""
    if n < 0:
        raise DomainError("n must be nonnegative")
    rng = make_generator(seed, stream_id)
    u = open_uniform(rng, n)
    values = np.asarray(eep_quantile(p, u), dtype=float).reshape(-1)
    return SampleBatch(values, int(seed), int(stream_id))


def mixture_cdf_partial(p: EepParams, x, m_max: int):
    """Partial sum of the EEP cdf written as a power series in the EE cdf.

    ``sum_{m=1}^{m_max} (-1)**(m+1) / m! * (lambda * F_EE(x))**m / (1 - exp(-lambda))``
    """
    if m_max < 1:
        raise DomainError("m_max must be at least 1")
    g = p.lam * np.asarray(ee_cdf(p.ee, x), dtype=float)
    term = np.ones_like(g)
    acc = np.zeros_like(g)
    for m in range(1, m_max + 1):
        term = term * g / m
        acc = acc + (term if m % 2 == 1 else -term)
    out = acc / _norm(p.lam)
    return _out(x, out)
