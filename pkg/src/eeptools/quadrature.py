"""Adaptive Gauss-Kronrod (7/15) quadrature for real and complex integrands.

The integrand must accept a 1-d numpy array of abscissae and return an array
of the same shape.  Panels are bisected largest-error-first, QUADPACK style.
"""

from __future__ import annotations

import heapq
import math
from typing import Callable, Sequence

import numpy as np
from scipy import special as sc

from .base import EvalResult

# Kronrod abscissae on [0, 1]; the odd-indexed ones are the 7-point Gauss nodes.
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

# full 15-point rule on [-1, 1]
_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_KW = np.concatenate([_WGK[:-1], _WGK[::-1]])
_GW = np.zeros(15)
_GW[1:7:2] = _WG[:3]
_GW[7] = _WG[3]
_GW[13:7:-2] = _WG[:3]

_EPMACH = np.finfo(float).eps
_UFLOW = np.finfo(float).tiny

Integrand = Callable[[np.ndarray], np.ndarray]


def _rule(fvals: np.ndarray, half: float):
    """Kronrod value and QUADPACK error estimate for one panel."""
    resk = np.dot(_KW, fvals)
    resg = np.dot(_GW, fvals)
    absf = np.abs(fvals)
    resabs = np.dot(_KW, absf)
    mean = resk * 0.5
    resasc = np.dot(_KW, np.abs(fvals - mean))
    err = abs(resk - resg) * half
    resasc *= half
    resabs *= half
    if resasc != 0.0 and err != 0.0:
        err = resasc * min(1.0, (200.0 * err / resasc) ** 1.5)
    if resabs > _UFLOW / (50.0 * _EPMACH):
        err = max(50.0 * _EPMACH * resabs, err)
    return resk * half, err


def _eval_panels(f: Integrand, bounds: Sequence[tuple[float, float]]):
    centers = np.array([(a + b) * 0.5 for a, b in bounds])
    halves = np.array([(b - a) * 0.5 for a, b in bounds])
    x = (centers[:, None] + halves[:, None] * _NODES[None, :]).ravel()
    fx = np.asarray(f(x)).reshape(len(bounds), 15)
    if not np.all(np.isfinite(fx)):
        raise FloatingPointError("integrand returned a non-finite value")
    return [_rule(fx[i], halves[i]) for i in range(len(bounds))]


def integrate(
    f: Integrand,
    a: float,
    b: float,
    epsabs: float = 1e-12,
    epsrel: float = 1e-10,
    limit: int = 2000,
    initial_panels: int = 1,
) -> EvalResult:
    """Integrate ``f`` over the finite interval ``[a, b]``.

    Returns an :class:`EvalResult` whose ``terms_used`` counts integrand
    evaluations.  ``converged`` is False if ``limit`` panels were not enough
    or if panels shrank to rounding level before the tolerance was met.
    """
    if not (math.isfinite(a) and math.isfinite(b)):
        raise ValueError("integrate needs finite limits; see integrate_halfline")
    if a == b:
        return EvalResult(0.0, 0.0, 0, True)
    sign = 1.0
    if b < a:
        a, b, sign = b, a, -1.0

    edges = np.linspace(a, b, initial_panels + 1)
    bounds = list(zip(edges[:-1], edges[1:]))
    heap: list = []
    frozen_val, frozen_err = [], []
    for (lo, hi), (val, err) in zip(bounds, _eval_panels(f, bounds)):
        heapq.heappush(heap, (-err, lo, hi, val))
    n_eval = 15 * len(bounds)

    def totals():
        vals = [h[3] for h in heap] + frozen_val
        errs = [-h[0] for h in heap] + frozen_err
        if vals and isinstance(vals[0], (complex, np.complexfloating)):
            tot = complex(math.fsum(v.real for v in vals), math.fsum(v.imag for v in vals))
        else:
            tot = math.fsum(float(v) for v in vals)
        return tot, math.fsum(errs)

    total, total_err = totals()
    n_iter = 0
    while total_err > max(epsabs, epsrel * abs(total)) and heap:
        if len(heap) + len(frozen_val) >= limit:
            break
        neg_err, lo, hi, val = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        if not (lo < mid < hi) or (hi - lo) <= 8 * _EPMACH * max(abs(lo), abs(hi)):
            # cannot bisect further in double precision
            frozen_val.append(val)
            frozen_err.append(-neg_err)
            continue
        halves = _eval_panels(f, [(lo, mid), (mid, hi)])
        n_eval += 30
        heapq.heappush(heap, (-halves[0][1], lo, mid, halves[0][0]))
        heapq.heappush(heap, (-halves[1][1], mid, hi, halves[1][0]))
        n_iter += 1
        if n_iter % 64 == 0:
            total, total_err = totals()
        else:
            total = total + (halves[0][0] + halves[1][0] - val)
            total_err = total_err + (halves[0][1] + halves[1][1] + neg_err)
    total, total_err = totals()

    converged = total_err <= max(epsabs, epsrel * abs(total))
    if isinstance(total, complex):
        value: complex | float = sign * total
    else:
        value = sign * float(total)
    return EvalResult(value, float(total_err), n_eval, bool(converged))


def tail_cutoff(scale: float, power: float, rate: float, start: float, tol: float) -> tuple[float, float]:
    """Point ``Y >= start`` beyond which ``scale * y**power * exp(-rate*y)`` integrates to < tol.

    Returns ``(Y, bound)`` with ``bound`` the exact integral of the envelope
    over ``[Y, inf)``.
    """
    if rate <= 0:
        raise ValueError("rate must be positive")
    k = max(power, 0.0)

    def bound(y):
        # scale * Gamma(k+1, rate*y) / rate**(k+1)
        return scale * math.exp(sc.gammaln(k + 1) + math.log(sc.gammaincc(k + 1, rate * y) + 1e-320)
                                - (k + 1) * math.log(rate))

    y = max(start, (k + 1) / rate)
    step = 8.0 / rate
    while bound(y) > tol:
        y += step
        step *= 1.5
    return y, bound(y)


def integrate_halfline(
    h: Integrand,
    power: float,
    rate: float,
    envelope_scale: float,
    envelope_power: float = 0.0,
    split: float = 1.0,
    epsabs: float = 1e-13,
    epsrel: float = 1e-12,
    limit: int = 4000,
    panel_width: float | None = None,
) -> EvalResult:
    """Integrate ``y**power * h(y)`` over ``[0, inf)``.

    ``h`` should be bounded near zero, where ``power > -1`` may make the
    integrand singular; that piece is integrated after the substitution
    ``y = split * r**(1/(power+1))``, which turns it into a bounded integrand.
    Beyond ``split`` the caller guarantees
    ``|y**power h(y)| <= envelope_scale * y**envelope_power * exp(-rate*y)``,
    which fixes a finite cutoff.  ``panel_width`` pre-splits the finite
    remainder (useful for oscillatory integrands).
    """
    if not power > -1.0:
        raise ValueError("power must exceed -1 for integrability at zero")
    q = 1.0 / (power + 1.0)

    def near(r):
        return h(split * r ** q)

    lo = integrate(near, 0.0, 1.0, epsabs=epsabs, epsrel=epsrel, limit=limit)
    lo_scale = split ** (power + 1.0) * q
    lo_val = lo.value * lo_scale
    lo_err = lo.abs_error_estimate * lo_scale

    cut, trunc = tail_cutoff(envelope_scale, envelope_power, rate, split, 0.01 * epsabs)

    def far(y):
        return y ** power * h(y)

    width = cut - split
    n_init = 1 if panel_width is None else max(1, min(200, int(math.ceil(width / panel_width))))
    hi = integrate(far, split, cut, epsabs=epsabs, epsrel=epsrel, limit=limit, initial_panels=n_init)
    return EvalResult(
        lo_val + hi.value,
        lo_err + hi.abs_error_estimate + trunc,
        lo.terms_used + hi.terms_used,
        lo.converged and hi.converged,
    )
