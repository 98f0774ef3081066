"""Maximum-likelihood fitting of EEP(alpha, beta, lam) by simplex search in log-parameters."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .base import DomainError
from .distributions import EepParams, eep_logpdf

HESSIAN_STEP = 1e-4


@dataclass(frozen=True)
class FitResult:
    params: EepParams
    log_likelihood: float
    iterations: int
    converged: bool
    standard_errors: tuple[float, float, float] | None = None

    def as_dict(self) -> dict:
        return {
            "alpha": self.params.alpha,
            "beta": self.params.beta,
            "lambda": self.params.lam,
            "log_likelihood": self.log_likelihood,
            "iterations": self.iterations,
            "converged": self.converged,
            "standard_errors": None if self.standard_errors is None else list(self.standard_errors),
        }


def log_likelihood(p: EepParams, data: np.ndarray) -> float:
    return float(np.sum(eep_logpdf(p, data)))


def initial_guess(data: np.ndarray) -> EepParams:
    """Crude start: beta from the mean, alpha from two sample quantiles under EE(alpha, beta)."""
    beta = 1.0 / float(np.mean(data))
    guesses = []
    for prob in (0.25, 0.75):
        q = float(np.quantile(data, prob))
        y = -math.expm1(-beta * q)
        if 0 < y < 1:
            guesses.append(math.log(prob) / math.log(y))
    alpha = float(np.clip(np.mean(guesses), 0.05, 50.0)) if guesses else 1.0
    return EepParams(alpha, beta, 1.0)


def _negll(theta: np.ndarray, data: np.ndarray) -> float:
    a, b, lam = np.exp(theta)
    if not all(math.isfinite(v) and v > 0 for v in (a, b, lam)):
        return math.inf
    val = -log_likelihood(EepParams(a, b, lam), data)
    return val if math.isfinite(val) else math.inf


def _standard_errors(theta: np.ndarray, data: np.ndarray) -> tuple[float, float, float] | None:
    # central-difference Hessian of -loglik in log-space, mapped back by the delta method
    h = HESSIAN_STEP
    f0 = _negll(theta, data)
    H = np.empty((3, 3))
    for i in range(3):
        for j in range(i, 3):
            ei, ej = np.eye(3)[i] * h, np.eye(3)[j] * h
            if i == j:
                v = (_negll(theta + ei, data) - 2 * f0 + _negll(theta - ei, data)) / h**2
            else:
                v = (_negll(theta + ei + ej, data) - _negll(theta + ei - ej, data)
                     - _negll(theta - ei + ej, data) + _negll(theta - ei - ej, data)) / (4 * h * h)
            H[i, j] = H[j, i] = v
    if not np.all(np.isfinite(H)):
        return None
    try:
        cov = np.linalg.inv(H)
    except np.linalg.LinAlgError:
        return None
    var = np.diag(cov)
    if np.any(var <= 0):
        return None
    se = np.exp(theta) * np.sqrt(var)
    return tuple(float(v) for v in se)


def fit_eep(data, initial: EepParams | None = None, max_iter: int = 5000) -> FitResult:
    """Maximize the EEP log-likelihood of positive ``data`` (at least 10 points)."""
    x = np.asarray(data, dtype=float).ravel()
    if x.size < 10:
        raise DomainError("fitting needs at least 10 observations")
    if not np.all(np.isfinite(x)) or np.any(x <= 0):
        raise DomainError("data must be positive and finite")
    start = initial_guess(x) if initial is None else initial
    theta0 = np.log([start.alpha, start.beta, start.lam])
    res = optimize.minimize(_negll, theta0, args=(x,), method="Nelder-Mead",
                            options={"xatol": 1e-8, "fatol": 1e-9, "maxiter": max_iter,
                                     "maxfev": 4 * max_iter, "adaptive": True})
    a, b, lam = np.exp(res.x)
    params = EepParams(float(a), float(b), float(lam))
    ll = -float(res.fun)
    converged = bool(res.success) and math.isfinite(ll)
    se = _standard_errors(res.x, x) if converged else None
    return FitResult(params, ll, int(res.nit), converged, se)
