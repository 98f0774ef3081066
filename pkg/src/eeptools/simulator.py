"""Monte Carlo realization of the EEP reliability model.

A system is a series connection of N blocks, N zero-truncated Poisson with
rate ``lam``; every block holds ``units_per_block`` identical exponential
units (rate ``beta``) wired in parallel.  For integer ``alpha`` the system
lifetime is exactly EEP(alpha, beta, lam).  The closed forms elsewhere in the
package extend to real ``alpha``; this simulation does not.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special as sc
from scipy import stats

from .base import DomainError
from .distributions import EepParams, eep_cdf
from .rng import make_generator, open_uniform

ZTP_INVERSION_MAX = 30.0
_CHUNK = 1 << 17


@dataclass(frozen=True)
class SystemSpec:
    units_per_block: int
    unit_rate: float
    block_count_rate: float

    def __post_init__(self):
        k = self.units_per_block
        if isinstance(k, bool) or not isinstance(k, (int, np.integer)) or k < 1:
            raise DomainError("units_per_block must be an integer >= 1")
        for name in ("unit_rate", "block_count_rate"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise DomainError(f"{name} must be positive and finite")
        object.__setattr__(self, "units_per_block", int(k))
        object.__setattr__(self, "unit_rate", float(self.unit_rate))
        object.__setattr__(self, "block_count_rate", float(self.block_count_rate))

    @property
    def params(self) -> EepParams:
        """The EEP law this system should follow."""
        return EepParams(self.units_per_block, self.unit_rate, self.block_count_rate)


@dataclass(frozen=True)
class KsReport:
    n: int
    ks_distance: float
    critical_value_1pct: float
    passed: bool

    def as_dict(self) -> dict:
        return {"n": self.n, "ks_distance": self.ks_distance,
                "critical_value_1pct": self.critical_value_1pct, "pass": self.passed}


def ztp_pmf(lam: float, n):
    """P{N = n} = lam**n / (n! (e**lam - 1)) for n >= 1, else 0."""
    if not lam > 0:
        raise DomainError("lambda must be positive")
    na = np.asarray(n, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        logp = na * math.log(lam) - sc.gammaln(na + 1.0) - (lam + math.log(-math.expm1(-lam)))
    out = np.where(na >= 1, np.exp(logp), 0.0)
    return float(out) if np.ndim(n) == 0 else out


def _ztp_draws(rng: np.random.Generator, lam: float, size: int) -> np.ndarray:
    if lam <= ZTP_INVERSION_MAX:
        # inversion against the cumulative pmf, tabulated until the tail is below rounding
        n_max = int(lam + 12.0 * math.sqrt(lam) + 40.0)
        cdf = np.cumsum(ztp_pmf(lam, np.arange(1, n_max + 1)))
        u = open_uniform(rng, size)
        idx = np.searchsorted(cdf, u, side="left")
        return np.minimum(idx, n_max - 1).astype(np.int64) + 1
    out = rng.poisson(lam, size).astype(np.int64)
    zero = out == 0
    while np.any(zero):
        out[zero] = rng.poisson(lam, int(zero.sum()))
        zero = out == 0
    return out


def sample_ztp(lam: float, seed: int, stream_id: int = 0, size: int | None = None):
    """Zero-truncated Poisson draws; a single int when ``size`` is None."""
    if not lam > 0:
        raise DomainError("lambda must be positive")
    rng = make_generator(seed, stream_id)
    draws = _ztp_draws(rng, float(lam), 1 if size is None else int(size))
    return int(draws[0]) if size is None else draws


def _lifetimes(rng: np.random.Generator, spec: SystemSpec, n: int) -> np.ndarray:
    counts = _ztp_draws(rng, spec.block_count_rate, n)
    k = spec.units_per_block
    blocks = rng.standard_exponential((int(counts.sum()), k)).max(axis=1) / spec.unit_rate
    starts = np.concatenate([[0], np.cumsum(counts)[:-1]])
    return np.minimum.reduceat(blocks, starts)


def sample_system_lifetime(spec: SystemSpec, seed: int, stream_id: int = 0, n: int | None = None):
    """Simulated system lifetimes; a single float when ``n`` is None.

    Work proceeds in fixed-size chunks drawn from one generator, so the output
    depends only on ``(spec, seed, stream_id, n)``.
    """
    rng = make_generator(seed, stream_id)
    total = 1 if n is None else int(n)
    if total < 0:
        raise DomainError("n must be nonnegative")
    parts = [_lifetimes(rng, spec, min(_CHUNK, total - i)) for i in range(0, total, _CHUNK)]
    out = np.concatenate(parts) if parts else np.empty(0)
    return float(out[0]) if n is None else out


def sample_block_lifetimes(spec: SystemSpec, n: int, seed: int, stream_id: int = 0) -> np.ndarray:
    """Lifetimes of single parallel blocks (max of ``units_per_block`` exponentials)."""
    rng = make_generator(seed, stream_id)
    return rng.standard_exponential((int(n), spec.units_per_block)).max(axis=1) / spec.unit_rate


def ks_critical_value_1pct(n: int) -> float:
    return 1.63 / math.sqrt(n)


def run_ks_validation(spec: SystemSpec, n: int, seed: int, stream_id: int = 0,
                      analytic: EepParams | None = None) -> KsReport:
    """Two-sided KS test of simulated lifetimes against the EEP distribution function.

    ``analytic`` overrides the law tested against (by default ``spec.params``),
    which is how a deliberately wrong model is checked to fail.
    """
    if n < 1000:
        raise DomainError("KS validation needs n >= 1000")
    target = spec.params if analytic is None else analytic
    x = sample_system_lifetime(spec, seed, stream_id, n)
    d = float(stats.kstest(x, lambda v: eep_cdf(target, v)).statistic)
    crit = ks_critical_value_1pct(n)
    return KsReport(int(n), d, crit, bool(d <= crit))
