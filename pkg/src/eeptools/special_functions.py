"""Gamma- and zeta-family special functions.

Contents: complex log-gamma (Lanczos), Pochhammer symbols and generalized
binomials, the confluent Fox-Wright function 1Psi1, the Hurwitz-Lerch zeta
function Phi(z, s, a), and its Goyal-Laddha generalization

    Phi*_mu(z, s, a) = sum_n (mu)_n / n! * z**n / (n + a)**s

in series and integral form.

Series results come back as :class:`EvalResult`.  Alternating series whose
terms are much larger than their sum cannot be summed accurately in double
precision whatever the summation order, so once the estimated rounding error
exceeds the requested tolerance the series is re-summed with mpmath at a
working precision derived from the observed cancellation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath
import numpy as np
from scipy import special as sc

from .base import DomainError, EvalResult
from .quadrature import integrate_halfline

EPS_REL = 1e-12
EPS_ABS = 1e-300
MAX_TERMS = 10_000

_EPS = np.finfo(float).eps
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


# ----------------------------------------------------------------------------
# gamma family
# ----------------------------------------------------------------------------

def _is_nonpositive_integer(z) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    return (z.imag == 0) & (z.real <= 0) & (z.real == np.round(z.real))


def _lanczos_log_gamma(z: np.ndarray) -> np.ndarray:
    # valid for Re z >= 0.5
    z = z - 1.0
    acc = np.full(z.shape, _LANCZOS_COEF[0], dtype=complex)
    for k, c in enumerate(_LANCZOS_COEF[1:], start=1):
        acc = acc + c / (z + k)
    t = z + (_LANCZOS_G + 0.5)
    return _HALF_LOG_2PI + (z + 0.5) * np.log(t) - t + np.log(acc)


def log_gamma_complex(z):
    """Principal branch of log Gamma(z) for complex ``z`` (scalar or array).

    Uses the Lanczos approximation (g = 7, nine coefficients) on
    ``Re z >= 0.5``.  Points left of that line are shifted right with the
    recurrence ``log G(z) = log G(z+n) - sum log(z+k)``, which keeps the branch
    cut on the negative real axis.

    Raises
    ------
    DomainError
        At the poles z = 0, -1, -2, ...
    """
    scalar = np.ndim(z) == 0
    zz = np.atleast_1d(np.asarray(z, dtype=complex))
    if np.any(_is_nonpositive_integer(zz)):
        raise DomainError("log_gamma_complex: pole at a nonpositive integer")
    shift = np.where(zz.real < 0.5, np.ceil(0.5 - zz.real), 0.0).astype(np.int64)
    out = _lanczos_log_gamma(zz + shift)
    for k in range(int(shift.max(initial=0))):
        m = shift > k
        out[m] -= np.log(zz[m] + k)
    return complex(out[0]) if scalar else out


def pochhammer(w, k: int):
    """Rising factorial (w)_k = w (w+1) ... (w+k-1); (w)_0 = 1."""
    if k < 0 or int(k) != k:
        raise ValueError("k must be a nonnegative integer")
    out = 1.0
    for j in range(int(k)):
        out *= w + j
    return out


def binomial_general(w: float, k: int) -> float:
    """Generalized binomial coefficient C(w, k) = (-1)**k (-w)_k / k!."""
    if k < 0 or int(k) != k:
        raise ValueError("k must be a nonnegative integer")
    out = 1.0
    for j in range(int(k)):
        out *= (w - j) / (j + 1)
    return out


# ----------------------------------------------------------------------------
# shared summation plumbing
# ----------------------------------------------------------------------------

def _bits(x: float) -> int:
    return int(math.ceil(math.log2(x))) if x > 0 else 0


def _mp_number(x):
    x = complex(x)
    return mpmath.mpf(x.real) if x.imag == 0 else mpmath.mpc(x.real, x.imag)


# ----------------------------------------------------------------------------
# confluent Fox-Wright 1Psi1
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class FoxWrightSpec:
    """Parameters of pPsiq[(a_j, A_j); (b_k, B_k) | x].

    ``upper`` and ``lower`` are sequences of ``(parameter, scale)`` pairs.  All
    scales must be positive and ``delta = 1 + sum(B) - sum(A)`` must be
    positive for the series to converge.
    """

    upper: tuple
    lower: tuple
    argument: complex

    def __post_init__(self):
        upper = tuple((complex(a), float(A)) for a, A in self.upper)
        lower = tuple((complex(b), float(B)) for b, B in self.lower)
        object.__setattr__(self, "upper", upper)
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "argument", complex(self.argument))
        for _, scale in upper + lower:
            if not scale > 0 or not math.isfinite(scale):
                raise DomainError("Fox-Wright scales A_j, B_k must be positive")
        if not self.delta > 0:
            raise DomainError(f"Fox-Wright series diverges: delta = {self.delta:g} <= 0")

    @property
    def delta(self) -> float:
        return 1.0 + sum(B for _, B in self.lower) - sum(A for _, A in self.upper)

    @classmethod
    def confluent(cls, a, A, b, B, x) -> "FoxWrightSpec":
        return cls(((a, A),), ((b, B),), x)


def _fw_log_terms(a, A, b, B, n: np.ndarray, log_x):
    """log|term| pieces for n in the block; returns (log_terms, log_sizes, zero_mask)."""
    up = a + A * n
    if np.any(_is_nonpositive_integer(up)):
        raise DomainError("Fox-Wright numerator Gamma(a + A n) hits a pole")
    lo = b + B * n
    zero = _is_nonpositive_integer(lo)
    lg_up = log_gamma_complex(up)
    lg_lo = np.zeros(n.shape, dtype=complex)
    if np.any(~zero):
        lg_lo[~zero] = log_gamma_complex(lo[~zero])
    lg_fac = sc.gammaln(n + 1.0)
    log_t = lg_up - lg_lo - lg_fac + n * log_x
    # magnitude of the pieces entering exp(); drives the rounding estimate
    size = np.abs(lg_up) + np.abs(lg_lo) + lg_fac + n * abs(log_x) + 4.0
    return log_t, size, zero


def _fox_wright_double(a, A, b, B, x, eps_rel, eps_abs, max_terms):
    log_x = np.log(x) if x != 0 else 0.0
    terms: list[complex] = []
    sizes: list[float] = []
    partial = 0j
    small_run = 0
    n0 = 0
    block = 32
    stop_at = None
    while stop_at is None and n0 < max_terms + 1:
        n = np.arange(n0, min(n0 + block, max_terms + 1), dtype=float)
        log_t, size, zero = _fw_log_terms(a, A, b, B, n, log_x)
        t = np.exp(log_t)
        t[zero] = 0.0
        if x == 0:
            t[n > 0] = 0.0
        for i in range(len(n)):
            terms.append(complex(t[i]))
            sizes.append(float(size[i]))
            partial += t[i]
            if abs(t[i]) <= eps_rel * abs(partial) + eps_abs:
                small_run += 1
            else:
                small_run = 0
            if small_run >= 3:
                stop_at = len(terms)
                break
        n0 += block
        block = min(2 * block, 512)
    return terms, sizes, stop_at


def _fox_wright_mp(a, A, b, B, x, eps_rel, eps_abs, max_terms, prec):
    with mpmath.workprec(prec):
        am, bm, xm = _mp_number(a), _mp_number(b), _mp_number(x)
        Am, Bm = mpmath.mpf(A), mpmath.mpf(B)
        log_x = mpmath.log(xm) if x != 0 else None
        terms = []
        partial = mpmath.mpf(0)
        small_run = 0
        stop_at = None
        for n in range(max_terms + 1):
            lo = bm + Bm * n
            if _is_nonpositive_integer(complex(lo)):
                t = mpmath.mpf(0)
            elif x == 0:
                t = mpmath.exp(mpmath.loggamma(am) - mpmath.loggamma(bm)) if n == 0 else mpmath.mpf(0)
            else:
                t = mpmath.exp(mpmath.loggamma(am + Am * n) - mpmath.loggamma(lo)
                               - mpmath.loggamma(n + 1) + n * log_x)
            terms.append(t)
            partial += t
            if abs(t) <= eps_rel * abs(partial) + eps_abs:
                small_run += 1
            else:
                small_run = 0
            if small_run >= 3:
                stop_at = n + 1
                break
        # one look-ahead term for the tail bound
        n = len(terms)
        if x == 0:
            nxt = mpmath.mpf(0)
        else:
            lo = bm + Bm * n
            nxt = mpmath.mpf(0) if _is_nonpositive_integer(complex(lo)) else mpmath.exp(
                mpmath.loggamma(am + Am * n) - mpmath.loggamma(lo) - mpmath.loggamma(n + 1) + n * log_x)
        total = mpmath.fsum(terms)
        abs_sum = mpmath.fsum(abs(t) for t in terms)
        return total, abs_sum, terms, nxt, stop_at


def _tail_bound(last, nxt, alternating: bool) -> float:
    nxt, last = abs(nxt), abs(last)
    if nxt == 0:
        return 0.0
    if alternating:
        return nxt
    r = nxt / last if last > 0 else 1.0
    return nxt / (1.0 - r) if r < 1 else float("inf")


def fox_wright_1psi1(
    spec: FoxWrightSpec,
    eps_rel: float = EPS_REL,
    max_terms: int = MAX_TERMS,
    eps_abs: float = EPS_ABS,
) -> EvalResult:
    """Confluent Fox-Wright function 1Psi1[(a, A); (b, B) | x].

    Sums ``Gamma(a + A n) / Gamma(b + B n) * x**n / n!`` until three
    consecutive terms fall below ``eps_rel * |partial sum| + eps_abs``.  The
    returned error estimate is the next-term magnitude for real alternating
    series, a geometric tail bound otherwise, plus a rounding estimate.

    Raises
    ------
    DomainError
        If ``spec`` is not of the confluent (1, 1) shape, or a numerator
        Gamma hits a pole.
    """
    if len(spec.upper) != 1 or len(spec.lower) != 1:
        raise DomainError("fox_wright_1psi1 needs exactly one upper and one lower pair")
    (a, A), = spec.upper
    (b, B), = spec.lower
    x = spec.argument
    alternating = x.real < 0 and x.imag == 0 and a.imag == 0 and b.imag == 0

    terms, sizes, stop_at = _fox_wright_double(a, A, b, B, x, eps_rel, eps_abs, max_terms)
    used = stop_at if stop_at is not None else len(terms)
    head = terms[:used]
    total = complex(math.fsum(t.real for t in head), math.fsum(t.imag for t in head))
    abs_sum = math.fsum(abs(t) for t in head)
    rounding = _EPS * math.fsum(abs(t) * s for t, s in zip(head, sizes)) + _EPS * used * abs(total)
    if stop_at is not None:
        nxt = terms[used] if used < len(terms) else _fw_next(a, A, b, B, x, used)
        tail = _tail_bound(head[-1], nxt, alternating)
    else:
        tail = float("inf")

    target = max(eps_rel * abs(total), eps_abs)
    if rounding > target:
        # cancellation: re-sum in extended precision
        need = _bits(abs_sum) - _bits(max(abs(total), 1e-300)) + _bits(max(sizes[:used])) + 1
        prec = 53 + max(need, 0) + 24
        for _ in range(6):
            total_mp, abs_mp, mp_terms, nxt, stop_mp = _fox_wright_mp(a, A, b, B, x, eps_rel, eps_abs,
                                                                     max_terms, prec)
            loss = _bits(float(abs_mp)) - _bits(float(abs(total_mp)) or 1e-300)
            if prec >= 53 + loss + 24 or total_mp == 0:
                break
            prec = 53 + loss + 32
        total = complex(total_mp)
        used = len(mp_terms)
        rounding = float(abs_mp) * 2.0 ** (-prec + 8) * used + _EPS * abs(total)
        tail = _tail_bound(mp_terms[-1], nxt, alternating) if stop_mp is not None else float("inf")
        stop_at = stop_mp

    value = total.real if (a.imag == 0 and b.imag == 0 and x.imag == 0) else total
    err = tail + rounding
    return EvalResult(value, float(err), used, stop_at is not None and math.isfinite(err))


def _fw_next(a, A, b, B, x, n):
    if x == 0:
        return 0.0
    log_t, _, zero = _fw_log_terms(a, A, b, B, np.array([float(n)]), np.log(x))
    return 0.0 if zero[0] else complex(np.exp(log_t[0]))


# ----------------------------------------------------------------------------
# Hurwitz-Lerch zeta and the Goyal-Laddha generalization
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class HlzStarArgs:
    """Arguments of Phi*_mu(z, s, a).

    On the unit circle the series is only accepted when ``s - mu > 1``.
    """

    mu: float
    z: float
    s: float
    a: float

    def __post_init__(self):
        for name in ("mu", "z", "s", "a"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise DomainError(f"{name} must be finite")
            object.__setattr__(self, name, v)
        if not -1.0 <= self.z <= 1.0:
            raise DomainError("z must lie in [-1, 1]")
        if self.a <= 0 and self.a == round(self.a):
            raise DomainError("a must not be a nonpositive integer")
        if abs(self.z) == 1.0 and not self.s - self.mu > 1.0:
            raise DomainError("on |z| = 1 the series needs s - mu > 1")

    @property
    def terminating(self) -> bool:
        return self.mu <= 0 and self.mu == round(self.mu)


def _stirling_ratio_coeffs(mu, s, a, J):
    """Coefficients d_j with (mu)_n/n! (n+a)^-s ~ n^(mu-1-s)/Gamma(mu) sum_j d_j n^-j.

    Built from the Bernoulli-polynomial expansion of log Gamma(n + h) and the
    binomial expansion of log(1 + a/n); must run inside an mpmath precision
    context.
    """
    mu, s, a = mpmath.mpf(mu), mpmath.mpf(s), mpmath.mpf(a)
    e = [mpmath.mpf(0)]
    for j in range(1, J + 1):
        sign = 1 if (j + 1) % 2 == 0 else -1
        gam = sign * (mpmath.bernpoly(j + 1, mu) - mpmath.bernpoly(j + 1, 1)) / (j * (j + 1))
        log1p = -s * (1 if j % 2 == 1 else -1) * a ** j / j
        e.append(gam + log1p)
    d = [mpmath.mpf(1)]
    for j in range(1, J + 1):
        d.append(mpmath.fsum(i * e[i] * d[j - i] for i in range(1, j + 1)) / j)
    return d


def _unit_circle_sum(p, z_sign: int, N: int):
    """sum_{n >= N} z**n n**-p for z = +1 or -1 (Hurwitz zeta forms)."""
    if z_sign > 0:
        return mpmath.zeta(p, N)
    half = mpmath.mpf(2) ** (-p)
    val = half * (mpmath.zeta(p, mpmath.mpf(N) / 2) - mpmath.zeta(p, mpmath.mpf(N + 1) / 2))
    return val if N % 2 == 0 else -val


def _phi_star_mp(mu, z, s, a, prec, eps_rel, max_terms, powers=None):
    """Phi*_mu(z, s, a) at working precision ``prec``.

    Returns ``(value, error_bound, abs_head_sum, terms, converged)`` as mpmath
    numbers.  ``powers`` may be a list caching (n + a)**-s at this precision;
    it is extended in place.
    """
    if powers is None:
        powers = []
    with mpmath.workprec(prec):
        mu_m, z_m, s_m, a_m = (mpmath.mpf(v) for v in (mu, z, s, a))

        def power(n):
            while len(powers) <= n:
                powers.append((len(powers) + a_m) ** (-s_m))
            return powers[n]

        coeff = mpmath.mpf(1)           # (mu)_n / n! * z**n
        head = []
        if mu <= 0 and mu == round(mu):
            n_end = int(-mu)
            if n_end + 1 > max_terms:
                return mpmath.mpf(0), mpmath.inf, mpmath.mpf(0), 0, False
            for n in range(n_end + 1):
                head.append(coeff * power(n))
                coeff *= (mu_m + n) * z_m / (n + 1)
            total = mpmath.fsum(head)
            abs_sum = mpmath.fsum(abs(t) for t in head)
            return total, abs_sum * mpmath.mpf(2) ** (-prec + 4), abs_sum, len(head), True

        if abs(z) < 1:
            partial = mpmath.mpf(0)
            small_run = 0
            tol = mpmath.mpf(eps_rel) / 4
            for n in range(max_terms):
                t = coeff * power(n)
                head.append(t)
                partial += t
                coeff *= (mu_m + n) * z_m / (n + 1)
                past_peak = n + 1 > abs(mu)
                small_run = small_run + 1 if abs(t) <= tol * abs(partial) else 0
                if small_run >= 3 and past_peak:
                    nn = n + 1
                    rho = abs(z_m) * max(mpmath.mpf(1), abs(mu_m + nn) / (nn + 1))
                    if s < 0:
                        rho *= ((nn + a_m + 1) / (nn + a_m)) ** (-s_m)
                    nxt = abs(coeff * power(nn))
                    if rho < 1 and nxt / (1 - rho) <= tol * abs(partial):
                        total = mpmath.fsum(head)
                        abs_sum = mpmath.fsum(abs(t) for t in head)
                        err = nxt / (1 - rho) + abs_sum * mpmath.mpf(2) ** (-prec + 4)
                        return total, err, abs_sum, len(head), True
            total = mpmath.fsum(head)
            return total, mpmath.inf, mpmath.fsum(abs(t) for t in head), len(head), False

        # |z| = 1, non-terminating: exact head plus asymptotic tail in Hurwitz zeta values.
        # The tail expansion improves with the head length, so N doubles until
        # the truncation error meets the target.
        N = max(32, int(math.ceil(4 * (abs(mu) + abs(a) + abs(s)))) + 16)
        z_sign = 1 if z > 0 else -1
        base = s_m + 1 - mu_m
        scale = 1 / mpmath.gamma(mu_m)
        J = 40
        d = _stirling_ratio_coeffs(mu, s, a, J)
        n_done = 0
        while True:
            if N > max_terms:
                return mpmath.mpf(0), mpmath.inf, mpmath.mpf(0), 0, False
            for n in range(n_done, N):
                head.append(coeff * power(n))
                coeff *= (mu_m + n) * z_m / (n + 1)
            n_done = N
            head_sum = mpmath.fsum(head)
            abs_sum = mpmath.fsum(abs(t) for t in head)
            tail, trunc = _zeta_tail(d, base, z_sign, N, prec)
            total = head_sum + scale * tail
            # the first omitted asymptotic term is not a strict bound; pad it
            err = 16 * abs(scale) * trunc + abs_sum * mpmath.mpf(2) ** (-prec + 4)
            ok = err <= max(mpmath.mpf(eps_rel) * abs(total), mpmath.mpf(2) ** (-prec + 8) * abs_sum)
            if ok or 2 * N > max_terms:
                return total, err, abs_sum, N, bool(ok)
            N *= 2


def _zeta_tail(d, base, z_sign, N, prec):
    """Sum of d_j Z(base + j) until the asymptotic terms stop shrinking."""
    terms = []
    prev = None
    for j, dj in enumerate(d):
        if dj == 0:
            continue
        term = dj * _unit_circle_sum(base + j, z_sign, N)
        mag = abs(term)
        if prev is not None and mag > prev:
            return mpmath.fsum(terms), prev
        terms.append(term)
        prev = mag
        if mag <= mpmath.mpf(2) ** (-prec) * abs(mpmath.fsum(terms)):
            return mpmath.fsum(terms), mag
    return mpmath.fsum(terms), (prev if prev is not None else mpmath.mpf(0))


def _phi_star_adaptive(mu, z, s, a, eps_rel, max_terms) -> EvalResult:
    """Phi*_mu with working precision raised until cancellation is absorbed."""
    bits = max(53, -int(math.floor(math.log2(eps_rel))) + 20)
    prec = bits + 16
    for _ in range(8):
        total, err, abs_sum, terms, ok = _phi_star_mp(mu, z, s, a, prec, eps_rel, max_terms)
        if not ok and err == mpmath.inf:
            break
        loss = _bits(float(abs_sum)) - _bits(float(abs(total)) or 1e-300)
        if prec >= bits + loss + 8 or total == 0:
            break
        prec = bits + loss + 16
    value = float(total)
    err_f = float(err) if err != mpmath.inf else float("inf")
    err_f += _EPS * abs(value)
    ok = bool(ok) and err_f <= max(eps_rel * abs(value), EPS_ABS) + 4 * _EPS * abs(value)
    return EvalResult(value, float(err_f), int(terms), bool(ok))


def hlz_phi(z: float, s: float, a: float, eps_rel: float = EPS_REL, max_terms: int = MAX_TERMS) -> EvalResult:
    """Hurwitz-Lerch zeta function Phi(z, s, a) = sum_n z**n / (n + a)**s.

    Needs ``|z| < 1``, or ``|z| = 1`` with ``s > 1``, and ``a`` not a
    nonpositive integer.
    """
    z, s, a = float(z), float(s), float(a)
    if a <= 0 and a == round(a):
        raise DomainError("a must not be a nonpositive integer")
    if abs(z) > 1 or (abs(z) == 1 and not s > 1):
        raise DomainError("Phi(z, s, a) needs |z| < 1, or |z| = 1 with s > 1")
    if z == 0:
        return EvalResult(a ** (-s), float(_EPS * a ** (-s)), 1, True)
    return _phi_star_adaptive(1.0, z, s, a, eps_rel, max_terms)


def goyal_laddha_phi_star(args: HlzStarArgs, eps_rel: float = EPS_REL, max_terms: int = MAX_TERMS) -> EvalResult:
    """Goyal-Laddha function Phi*_mu(z, s, a) by its defining series.

    For a nonpositive integer ``mu`` the series stops after ``-mu + 1`` terms
    and the result is exact up to rounding.  On ``|z| = 1`` the slowly
    decaying tail is summed through its large-n expansion in Hurwitz zeta
    values.
    """
    if args.z == 0 or args.mu == 0:
        v = args.a ** (-args.s)
        return EvalResult(v, _EPS * abs(v), 1, True)
    return _phi_star_adaptive(args.mu, args.z, args.s, args.a, eps_rel, max_terms)


def goyal_laddha_integral(args: HlzStarArgs, epsabs: float = 1e-14, epsrel: float = 1e-12) -> EvalResult:
    """Phi*_mu(z, s, a) from its integral representation.

        Phi*_mu(z, s, a) = 1/Gamma(s) int_0^inf t**(s-1) exp(-a t) (1 - z exp(-t))**(-mu) dt

    Note the ``exp(-a t)`` kernel: expanding the binomial term by term shows
    this is the form that reproduces the series.
    """
    mu, z, s, a = args.mu, args.z, args.s, args.a
    if not s > 0:
        raise DomainError("integral form needs s > 0")
    if not a > 0:
        raise DomainError("integral form needs a > 0")
    # near t = 0 the integrand behaves like t**(s-1) * (1-z)**(-mu), or t**(s-1-mu) when z = 1
    power = s - 1.0 - (mu if z == 1.0 else 0.0)
    if not power > -1:
        raise DomainError("integrand not integrable at t = 0")
    log_norm = sc.gammaln(s)

    def h(t):
        t = np.asarray(t, dtype=float)
        one_minus = np.where(z == 1.0, -np.expm1(-t), 1.0 - z * np.exp(-t))
        # remove the t**power factor analytically so h stays bounded at 0
        if z == 1.0:
            ratio = np.where(t > 0, one_minus / np.where(t > 0, t, 1.0), 1.0)
            log_h = -a * t - mu * np.log(ratio) - log_norm
        else:
            log_h = -a * t - mu * np.log(one_minus) - log_norm
        return np.exp(log_h)

    # envelope past t = 1: (1 - z e^-t)^-mu <= max over t >= 1, times t^(s-1) e^(-a t)
    zc = min(z, 1.0)
    lo_env = 1.0 - zc * math.exp(-1.0) if zc > 0 else 1.0
    hi_env = 1.0 + max(-zc, 0.0)
    env = max(lo_env ** (-mu), hi_env ** (-mu)) * math.exp(-log_norm)
    res = integrate_halfline(h, power, a, env, envelope_power=s - 1.0, split=1.0,
                             epsabs=epsabs, epsrel=epsrel)
    return res
