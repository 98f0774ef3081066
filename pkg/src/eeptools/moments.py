"""Characteristic function, transform and real-order moments of EE and EEP.

Closed forms
------------
* CHF: ``phi(t) = a lam Gamma(1 - i t/beta) / (1 - e^-lam) * 1Psi1[(a, a); (1 + a - i t/beta, a) | -lam]``
* ``M(t) = phi(i t)``: the same expression with ``Gamma(1 + t/beta)`` and
  lower parameter ``1 + a + t/beta``, valid for ``t > -beta``.  Note that with
  this convention ``M(t) = E exp(-t xi)``, so ``M'(0) = -E xi``.
* EE moments: ``E eta**nu = a Gamma(nu+1) / beta**nu * Phi*_{1-a}(1, nu+1, 1)`` for ``nu > 1 - a``.
* EEP moments: ``E xi**nu = a lam Gamma(nu+1) / (beta**nu (1-e^-lam)) *
  sum_m Phi*_{1-a(m+1)}(1, nu+1, 1) (-lam)**m / m!`` for ``nu > 1 - a``.

Each has a quadrature counterpart used for cross-validation and, above
``LAMBDA_SWITCH``, as the evaluation route.
"""

from __future__ import annotations

import math
from functools import lru_cache

import mpmath
import numpy as np

from .base import ConvergenceError, DomainError, EvalResult
from .distributions import EeParams, EepParams
from .quadrature import integrate, integrate_halfline, tail_cutoff
from .special_functions import (
    EPS_REL,
    MAX_TERMS,
    FoxWrightSpec,
    HlzStarArgs,
    _phi_star_mp,
    fox_wright_1psi1,
    goyal_laddha_phi_star,
    log_gamma_complex,
)

MGF_EPS_REL = 1e-15
LAMBDA_SWITCH = 30.0

_EPS = np.finfo(float).eps
_LOG2E = 1.0 / math.log(2.0)


def _norm(lam: float) -> float:
    return -math.expm1(-lam)


def _finish(res: EvalResult, full_output: bool, what: str):
    if full_output:
        return res
    res.require_converged(what)
    return res.value


# ---------------------------------------------------------------------------
# characteristic function
# ---------------------------------------------------------------------------

def eep_chf(p: EepParams, t: float, eps_rel: float = EPS_REL, max_terms: int = MAX_TERMS,
            full_output: bool = False):
    """Characteristic function E exp(i t xi) from the Fox-Wright closed form.

    Negative ``t`` is evaluated as the conjugate of ``-t``, so Hermitian
    symmetry holds exactly.  For ``lam > LAMBDA_SWITCH`` the quadrature route
    is used.
    """
    t = float(t)
    if t < 0:
        res = eep_chf(p, -t, eps_rel, max_terms, full_output=True)
        res = EvalResult(complex(res.value).conjugate(), res.abs_error_estimate,
                         res.terms_used, res.converged)
        return _finish(res, full_output, "eep_chf")
    if p.lam > LAMBDA_SWITCH:
        return eep_chf_quadrature(p, t, full_output=full_output)
    tau = t / p.beta
    spec = FoxWrightSpec.confluent(p.alpha, p.alpha, complex(1.0 + p.alpha, -tau), p.alpha, -p.lam)
    fw = fox_wright_1psi1(spec, eps_rel=eps_rel, max_terms=max_terms)
    pref = p.alpha * p.lam / _norm(p.lam) * np.exp(log_gamma_complex(complex(1.0, -tau)))
    value = complex(pref * fw.value)
    err = abs(pref) * fw.abs_error_estimate + 4 * _EPS * abs(value)
    return _finish(EvalResult(value, float(err), fw.terms_used, fw.converged), full_output, "eep_chf")


def _y_tail_envelope(p: EepParams) -> float:
    # bound on alpha lam/(1-e^-lam) (1-e^-y)^(alpha-1) exp(-lam (1-e^-y)^alpha) for y >= 1
    y1 = -math.expm1(-1.0)
    return p.alpha * p.lam / _norm(p.lam) * max(y1 ** (p.alpha - 1.0), 1.0) * math.exp(-p.lam * y1 ** p.alpha)


def eep_chf_quadrature(p: EepParams, t: float, epsabs: float = 1e-13, full_output: bool = False):
    """CHF by quadrature of the unit-interval integral

        alpha lam / (1 - e^-lam) int_0^1 (1-u)^(-i t/beta) u^(alpha-1) exp(-lam u^alpha) du.

    On ``[0, 1 - e^-1]`` the substitution ``u = c r**(1/alpha)`` removes the
    ``u**(alpha-1)`` singularity; the rest is mapped back to ``u = 1 - e^-y``
    where the oscillation is regular and the integrand decays like ``e^-y``.
    """
    tau = float(t) / p.beta
    a, lam = p.alpha, p.lam
    c = lam / _norm(lam)
    uc = -math.expm1(-1.0)
    uca = uc ** a

    def near(r):
        u = uc * r ** (1.0 / a)
        return np.exp(-1j * tau * np.log1p(-u) - lam * uca * r)

    lo = integrate(near, 0.0, 1.0, epsabs=epsabs, epsrel=1e-13, limit=4000)
    lo_val, lo_err = c * uca * lo.value, c * uca * lo.abs_error_estimate

    def far(y):
        w = -np.expm1(-y)
        return a * c * np.exp(1j * tau * y - y + (a - 1.0) * np.log(w) - lam * w ** a)

    cut, trunc = tail_cutoff(_y_tail_envelope(p), 0.0, 1.0, 1.0, 0.01 * epsabs)
    width = 2.0 if tau == 0 else min(2.0, math.pi / abs(tau))
    n_init = max(1, min(400, int(math.ceil((cut - 1.0) / width))))
    hi = integrate(far, 1.0, cut, epsabs=epsabs, epsrel=1e-13, limit=8000, initial_panels=n_init)
    value = complex(lo_val + hi.value)
    res = EvalResult(value, float(lo_err + hi.abs_error_estimate + trunc),
                     lo.terms_used + hi.terms_used, lo.converged and hi.converged)
    return _finish(res, full_output, "eep_chf_quadrature")


# ---------------------------------------------------------------------------
# moment generating function in the phi(i t) convention
# ---------------------------------------------------------------------------

def _check_mgf_domain(p: EepParams, t: float):
    if not t > -p.beta:
        raise DomainError(f"t must exceed -beta (t = {t:g}, beta = {p.beta:g})")


def eep_mgf(p: EepParams, t: float, eps_rel: float = EPS_REL, max_terms: int = MAX_TERMS,
            full_output: bool = False):
    """Transform M(t) = phi(i t) = E exp(-t xi) for t > -beta.

    Closed form ``a lam Gamma(1+t/beta)/(1-e^-lam) 1Psi1[(a,a); (1+a+t/beta, a) | -lam]``.
    The bound ``t > -beta`` is strict: the Gamma factor has simple poles at
    ``t = -m beta``, and no continuation past the first one is attempted.
    """
    t = float(t)
    _check_mgf_domain(p, t)
    if p.lam > LAMBDA_SWITCH:
        return eep_mgf_quadrature(p, t, full_output=full_output)
    tau = t / p.beta
    spec = FoxWrightSpec.confluent(p.alpha, p.alpha, 1.0 + p.alpha + tau, p.alpha, -p.lam)
    # derivatives at 0 are taken by finite differences, so hold the sum to full double precision
    fw = fox_wright_1psi1(spec, eps_rel=min(eps_rel, MGF_EPS_REL), max_terms=max_terms)
    pref = p.alpha * p.lam / _norm(p.lam) * math.exp(math.lgamma(1.0 + tau))
    value = float(pref * fw.value)
    err = pref * fw.abs_error_estimate + 4 * _EPS * abs(value)
    return _finish(EvalResult(value, float(err), fw.terms_used, fw.converged), full_output, "eep_mgf")


def eep_mgf_quadrature(p: EepParams, t: float, epsabs: float = 1e-14, full_output: bool = False):
    """Quadrature of E exp(-t xi) = int exp(-t x) f(x) dx, for t > -beta."""
    t = float(t)
    _check_mgf_domain(p, t)
    tau = t / p.beta
    a, lam = p.alpha, p.lam
    c = a * lam / _norm(lam)

    def h(y):
        w = -np.expm1(-y)
        ratio = np.where(y > 0, w / np.where(y > 0, y, 1.0), 1.0)
        return c * np.exp(-(1.0 + tau) * y + (a - 1.0) * np.log(ratio) - lam * w ** a)

    env = _y_tail_envelope(p) * math.exp(-tau) if tau < 0 else _y_tail_envelope(p)
    res = integrate_halfline(h, a - 1.0, 1.0 + tau, env, 0.0, epsabs=epsabs, epsrel=1e-13)
    res = EvalResult(float(res.value), res.abs_error_estimate, res.terms_used, res.converged)
    return _finish(res, full_output, "eep_mgf_quadrature")


# ---------------------------------------------------------------------------
# EE moments
# ---------------------------------------------------------------------------

def ee_moment(p: EeParams, nu: float, eps_rel: float = EPS_REL, full_output: bool = False):
    """Real-order moment E eta**nu of EE(alpha, beta), valid for nu > 1 - alpha."""
    nu = float(nu)
    if not nu > 1.0 - p.alpha:
        raise DomainError(f"nu must exceed 1 - alpha = {1.0 - p.alpha:g}")
    pref = p.alpha * math.gamma(nu + 1.0) / p.beta ** nu
    phi = goyal_laddha_phi_star(HlzStarArgs(1.0 - p.alpha, 1.0, nu + 1.0, 1.0), eps_rel=eps_rel)
    value = pref * phi.value
    res = EvalResult(float(value), float(pref * phi.abs_error_estimate + 2 * _EPS * abs(value)),
                     phi.terms_used, phi.converged)
    return _finish(res, full_output, "ee_moment")


def _richardson_tail(log_first: float, sign_first: float, w: float, power: int, k0: int, levels: int):
    """Sum over k >= k0 of c_k / (k+1)**power, c_k = (-w)_k / k!, by Richardson extrapolation.

    ``log_first`` and ``sign_first`` describe c_{k0}.  Partial sums at k0 * 2**i are extrapolated
    assuming an error expansion in powers (k0 2**i)**-(q + j), q = w + power.
    Returns ``(value, error_estimate)``.
    """
    n_terms = k0 * (2 ** levels - 1)
    k = np.arange(k0, k0 + n_terms, dtype=float)
    log_step = np.log1p(-(w + 1.0) / (k[:-1] + 1.0))       # log((k - w)/(k + 1))
    log_c = log_first + np.concatenate([[0.0], np.cumsum(log_step)])
    terms = sign_first * np.exp(log_c - power * np.log(k + 1.0))
    csum = np.cumsum(terms)
    ends = [k0 * (2 ** i - 1) for i in range(levels + 1)]
    partial = np.array([0.0] + [csum[e - 1] for e in ends[1:]])
    q = w + power
    if q > 8.0:
        # remainder past the last level is below |t_end| k_end / (q - 1)
        bound = abs(terms[-1]) * (k[-1] + 1.0) / (q - 1.0)
        return csum[-1], 2.0 * bound + _EPS * abs(csum[-1]) * 8

    def solve(L):
        # use the L + 1 finest levels
        rows = np.arange(levels - L, levels + 1)
        mat = np.ones((L + 1, L + 1))
        for j in range(L):
            mat[:, j + 1] = -(2.0 ** (-rows * (q + j)))
        return np.linalg.solve(mat, partial[rows])[0]

    best = solve(levels)
    prev = solve(levels - 1)
    return best, abs(best - prev) + _EPS * abs(csum[-1]) * 8


def _binomial_alternating_series(w: float, power: int, k_max: int, prec: int):
    """sum_k (-1)**k C(w, k) / (k+1)**power, summed literally in binomial form.

    Terminates when ``w`` is a nonnegative integer.  Otherwise the head is
    summed exactly and the monotone tail is Richardson-extrapolated.  Returns
    mpmath numbers ``(value, error, abs_head_sum, terms, converged)``.
    """
    with mpmath.workprec(prec):
        wm = mpmath.mpf(w)
        coef = mpmath.mpf(1)           # C(w, k)
        head = []
        if w >= 0 and w == round(w):
            for k in range(int(w) + 1):
                head.append((-1) ** k * coef / mpmath.mpf(k + 1) ** power)
                coef = coef * (wm - k) / (k + 1)
            s = mpmath.fsum(head)
            abs_sum = mpmath.fsum(abs(h) for h in head)
            return s, abs_sum * mpmath.mpf(2) ** (-prec + 4), abs_sum, len(head), True
        k0 = max(64, int(math.ceil(4 * abs(w))) + 32)
        levels = 6
        while levels > 2 and k0 * (2 ** levels - 1) + k0 > k_max:
            levels -= 1
        if k0 * (2 ** levels) > k_max and levels <= 2:
            return mpmath.mpf(0), mpmath.inf, mpmath.mpf(0), 0, False
        for k in range(k0):
            head.append((-1) ** k * coef / mpmath.mpf(k + 1) ** power)
            coef = coef * (wm - k) / (k + 1)
        s = mpmath.fsum(head)
        abs_sum = mpmath.fsum(abs(h) for h in head)
        first = (-1) ** k0 * coef
        if first == 0:
            tail, tail_err = 0.0, 0.0
        else:
            tail, tail_err = _richardson_tail(float(mpmath.log(abs(first))), 1.0 if first > 0 else -1.0,
                                              w, power, k0, levels)
        total = s + mpmath.mpf(tail)
        err = mpmath.mpf(tail_err) + abs_sum * mpmath.mpf(2) ** (-prec + 4)
        return total, err, abs_sum, k0 * 2 ** levels, True


def ee_moment_gupta_kundu(p: EeParams, n: int, k_max: int = 1_000_000, full_output: bool = False):
    """Integer moment E eta**n from the alternating binomial series

        alpha n! / beta**n * sum_k (-1)**k C(alpha-1, k) / (k+1)**(n+1).
    """
    if int(n) != n or n < 1:
        raise DomainError("n must be a positive integer")
    n = int(n)
    prec = 80 + int(math.ceil(max(0.0, p.alpha - 1.0))) + 16
    val, err, _, terms, ok = _binomial_alternating_series(p.alpha - 1.0, n + 1, k_max, prec)
    pref = p.alpha * math.factorial(n) / p.beta ** n
    value = pref * float(val)
    err_f = pref * float(err) + 2 * _EPS * abs(value) if ok else math.inf
    ok = ok and err_f <= 1e-11 * abs(value)
    return _finish(EvalResult(value, float(err_f), int(terms), bool(ok)), full_output, "ee_moment_gupta_kundu")


# ---------------------------------------------------------------------------
# EEP moments
# ---------------------------------------------------------------------------

def _outer_terms_needed(lam: float, bits: int) -> int:
    # smallest m past lam where lam**m / m! < 2**-bits * e**-lam
    log_target = -(bits * math.log(2.0)) - lam
    m = 0
    log_c = 0.0
    while m <= lam or log_c > log_target:
        m += 1
        log_c += math.log(lam) - math.log(m)
        if m > 100_000:
            break
    return m


def _weighted_phi_series(alpha, lam, inner, eps_rel, max_terms, prec):
    """sum_m (-lam)**m / m! * inner(m) at working precision ``prec``.

    ``inner(m, prec)`` returns ``(value, error, abs_sum, terms, ok)``.  The
    result carries the loss estimate needed to decide whether ``prec`` was
    enough.
    """
    with mpmath.workprec(prec):
        lam_m = mpmath.mpf(lam)
        weight = mpmath.mpf(1)
        terms, err_acc, need_bits = [], mpmath.mpf(0), []
        partial = mpmath.mpf(0)
        small_run = 0
        used = 0
        converged = False
        nxt_bound = mpmath.inf
        for m in range(max_terms):
            val, err, abs_sum, n_inner, ok = inner(m, prec)
            if err == mpmath.inf:
                break
            t = (-1) ** m * weight * val
            terms.append(t)
            err_acc += weight * err
            need_bits.append(weight * abs_sum)
            used += n_inner
            partial += t
            small_run = small_run + 1 if abs(t) <= mpmath.mpf(eps_rel) / 8 * abs(partial) else 0
            weight = weight * lam_m / (m + 1)
            if small_run >= 3 and m + 1 > lam:
                # terms now alternate with decreasing modulus
                nval = inner(m + 1, prec)
                nxt_bound = weight * abs(nval[0]) + weight * nval[1]
                converged = True
                break
        total = mpmath.fsum(terms)
        abs_total = max(need_bits) if need_bits else mpmath.mpf(0)
        rounding = mpmath.fsum(need_bits) * mpmath.mpf(2) ** (-prec + 6)
        err_total = nxt_bound + err_acc + rounding
        return total, err_total, abs_total, used, converged


def _series_with_precision(alpha, lam, inner, eps_rel, max_terms):
    bits = -int(math.floor(math.log2(eps_rel))) + 16
    m_est = _outer_terms_needed(lam, bits)
    prec = bits + int(math.ceil(lam * _LOG2E)) + int(math.ceil(alpha * (m_est + 1))) + 24
    for _ in range(5):
        total, err, max_abs, used, ok = _weighted_phi_series(alpha, lam, inner, eps_rel, max_terms, prec)
        if total == 0:
            break
        need = bits + int(math.ceil(math.log2(float(max_abs) / float(abs(total))))) + 16
        if prec >= need:
            break
        prec = need + 16
    return float(total), float(err), used, bool(ok)


@lru_cache(maxsize=1024)
def _moment_series_core(alpha: float, lam: float, nu: float, eps_rel: float, max_terms: int):
    s = nu + 1.0
    tables: dict[int, list] = {}
    # outer weights lam**m/m! reach ~e**lam, so the inner sums need that much headroom
    inner_eps = eps_rel * 2.0 ** -(lam * _LOG2E + 8)

    def inner(m, prec):
        powers = tables.setdefault(prec, [])
        mu = 1.0 - alpha * (m + 1)
        return _phi_star_mp(mu, 1.0, s, 1.0, prec, inner_eps, max_terms, powers)

    return _series_with_precision(alpha, lam, inner, eps_rel, max_terms)


def eep_moment(p: EepParams, nu: float, eps_rel: float = EPS_REL, max_terms: int = MAX_TERMS) -> EvalResult:
    """Real-order moment E xi**nu as a weighted sum of Goyal-Laddha functions.

    Valid for ``nu > 1 - alpha``; negative orders inside that range are
    allowed.  For ``lam > LAMBDA_SWITCH`` the value comes from
    :func:`eep_moment_quadrature`.
    """
    nu = float(nu)
    if not nu > 1.0 - p.alpha:
        raise DomainError(f"nu must exceed 1 - alpha = {1.0 - p.alpha:g}")
    if p.lam > LAMBDA_SWITCH:
        return eep_moment_quadrature(p, nu)
    total, err, used, ok = _moment_series_core(p.alpha, p.lam, nu, float(eps_rel), int(max_terms))
    pref = p.alpha * p.lam * math.gamma(nu + 1.0) / (p.beta ** nu * _norm(p.lam))
    value = pref * total
    err_v = pref * err + 4 * _EPS * abs(value)
    ok = ok and err_v <= max(eps_rel, 8 * _EPS) * abs(value)
    return EvalResult(float(value), float(err_v), used, bool(ok))


def eep_moment_double_series(p: EepParams, n: int, m_max: int | None = None, k_max: int = 1_000_000,
                             eps_rel: float = EPS_REL, full_output: bool = False):
    """Integer moment E xi**n from the double binomial series

        alpha lam n! / (beta**n (1-e^-lam)) sum_{m,k} (-1)**(m+k) lam**m / (m! (k+1)**(n+1)) C(alpha(m+1)-1, k).

    Kept as an independent cross-check of :func:`eep_moment`: the inner sums
    run over binomial coefficients directly and their tails are extrapolated
    rather than expanded.
    """
    if int(n) != n or n < 1:
        raise DomainError("n must be a positive integer")
    n = int(n)
    outer_max = MAX_TERMS if m_max is None else int(m_max)

    def inner(m, prec):
        return _binomial_alternating_series(p.alpha * (m + 1) - 1.0, n + 1, k_max, prec)

    total, err, used, ok = _cached_double_series(p.alpha, p.lam, n, k_max, eps_rel, outer_max, inner)
    pref = p.alpha * p.lam * math.factorial(n) / (p.beta ** n * _norm(p.lam))
    value = pref * total
    err_v = pref * err + 4 * _EPS * abs(value)
    ok = ok and err_v <= max(eps_rel, 8 * _EPS) * abs(value) * 10
    return _finish(EvalResult(float(value), float(err_v), used, bool(ok)), full_output,
                   "eep_moment_double_series")


_double_cache: dict = {}


def _cached_double_series(alpha, lam, n, k_max, eps_rel, outer_max, inner):
    key = (alpha, lam, n, k_max, eps_rel, outer_max)
    hit = _double_cache.get(key)
    if hit is None:
        hit = _series_with_precision(alpha, lam, inner, eps_rel, outer_max)
        if len(_double_cache) < 1024:
            _double_cache[key] = hit
    return hit


def _moment_integral(a: float, beta: float, lam: float, nu: float, epsabs: float, epsrel: float) -> EvalResult:
    # lam == 0 gives the EE density
    if not nu > -a:
        raise DomainError(f"nu must exceed -alpha = {-a:g} for the moment to exist")
    c = a if lam == 0 else a * lam / _norm(lam)
    y1 = -math.expm1(-1.0)
    envelope = c * max(y1 ** (a - 1.0), 1.0) * math.exp(-lam * y1 ** a)

    def h(y):
        w = -np.expm1(-y)
        ratio = np.where(y > 0, w / np.where(y > 0, y, 1.0), 1.0)
        return c * np.exp(-y + (a - 1.0) * np.log(ratio) - lam * w ** a)

    scale_guess = math.gamma(nu + 1.0) if nu > -1 else 1.0
    res = integrate_halfline(h, nu + a - 1.0, 1.0, envelope, max(nu, 0.0),
                             epsabs=epsabs * scale_guess, epsrel=epsrel)
    scale = beta ** (-nu)
    return EvalResult(float(res.value * scale), float(res.abs_error_estimate * scale),
                      res.terms_used, res.converged)


def eep_moment_quadrature(p: EepParams, nu: float, epsabs: float = 1e-15, epsrel: float = 1e-13) -> EvalResult:
    """E xi**nu = int_0^inf x**nu f(x) dx by adaptive quadrature, for nu > -alpha.

    The integrand behaves like x**(nu + alpha - 1) at zero; the power
    substitution in :func:`integrate_halfline` makes it bounded.
    """
    return _moment_integral(p.alpha, p.beta, p.lam, float(nu), epsabs, epsrel)


def ee_moment_quadrature(p: EeParams, nu: float, epsabs: float = 1e-15, epsrel: float = 1e-13) -> EvalResult:
    """E eta**nu for EE(alpha, beta) by adaptive quadrature, for nu > -alpha."""
    return _moment_integral(p.alpha, p.beta, 0.0, float(nu), epsabs, epsrel)


def eep_mean_variance(p: EepParams) -> tuple[float, float]:
    """(mean, variance) from the first two moments."""
    m1 = eep_moment(p, 1.0).require_converged("eep_moment(1)").value
    m2 = eep_moment(p, 2.0).require_converged("eep_moment(2)").value
    var = m2 - m1 * m1
    if not var > 0:
        raise ConvergenceError("variance came out nonpositive")
    return m1, var
