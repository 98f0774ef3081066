"""Acceptance suite: one test per numbered criterion, each printing a PASS/FAIL line.

Run ``pytest tests/test_acceptance.py -v -s`` to see the lines inline; they are
also collected in the terminal summary.
"""

import math
import time

import mpmath
import numpy as np
import pytest

from eeptools import (
    DomainError,
    EeParams,
    EepParams,
    HlzStarArgs,
    SystemSpec,
    ee_moment,
    ee_moment_gupta_kundu,
    eep_cdf,
    eep_chf,
    eep_chf_quadrature,
    eep_mean_variance,
    eep_mgf,
    eep_moment,
    eep_moment_double_series,
    eep_moment_quadrature,
    eep_quantile,
    eep_sample,
    eep_survival,
    fit_eep,
    goyal_laddha_integral,
    goyal_laddha_phi_star,
    run_ks_validation,
)

from conftest import ALPHAS, BETAS, GRID, mp_expectation

pytestmark = pytest.mark.acceptance


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


def test_criterion_01_chf_normalization(acceptance_line):
    with Timer() as clock:
        worst = max(abs(eep_chf(EepParams(a, b, lam), 0.0) - 1.0) for a, b, lam in GRID)
    ok = worst <= 1e-12 and clock.elapsed < 1.0
    acceptance_line(1, "chf(0) = 1", ok, f"max |chf(0) - 1| = {worst:.2e} (<= 1e-12), {clock.elapsed:.2f} s (< 1 s)")
    assert ok


def test_criterion_02_chf_series_vs_quadrature(acceptance_line):
    worst, where = 0.0, None
    with Timer() as clock:
        for a, b, lam in GRID:
            if lam > 20:
                continue
            p = EepParams(a, b, lam)
            for k in (0.5, 2.0, 10.0):
                for t in (k * b, -k * b):
                    d = abs(eep_chf(p, t) - eep_chf_quadrature(p, t))
                    if d > worst:
                        worst, where = d, (a, b, lam, t)
    ok = worst <= 1e-8 and clock.elapsed < 30.0
    acceptance_line(2, "chf series vs quadrature", ok,
                    f"max diff {worst:.2e} at (a, b, lam, t) = {where} (<= 1e-8), {clock.elapsed:.1f} s (< 30 s)")
    assert ok


def _exp_tx_quadrature(p: EepParams, t: float) -> float:
    """Integral of exp(t x) pdf(x) over (0, inf); the tail decays like exp((t - beta) x)."""
    if t >= p.beta:
        return math.inf
    return float(mp_expectation(p, lambda x: mpmath.exp(t * x)))


def test_criterion_03_mgf_consistency(acceptance_line):
    checked = agreed = diverged = 0
    with Timer() as clock:
        for a, b, lam in GRID:
            p = EepParams(a, b, lam)
            for t in (-b / 2, 0.5, b):
                checked += 1
                ref = _exp_tx_quadrature(p, t)
                diverged += not math.isfinite(ref)
                try:
                    val = eep_mgf(p, t)
                except DomainError:
                    val = math.nan
                rel = abs(val - ref) / abs(ref) if math.isfinite(ref) and ref != 0 else math.inf
                agreed += rel <= 1e-8
        domain_ok = True
        for a, b, lam in GRID:
            for t in (-b, -2 * b):
                try:
                    eep_mgf(EepParams(a, b, lam), t)
                    domain_ok = False
                except DomainError:
                    pass
    ok = agreed == checked and domain_ok and clock.elapsed < 30.0
    acceptance_line(3, "mgf vs quadrature of exp(t x) pdf", ok,
                    f"{agreed}/{checked} points within 1e-8 ({diverged} reference integrals diverge); "
                    f"domain error for t <= -beta: {domain_ok}; {clock.elapsed:.1f} s (< 30 s)")
    assert ok


def test_criterion_04_series_vs_double_series(acceptance_line):
    worst, where = 0.0, None
    with Timer() as clock:
        for a, b, lam in GRID:
            if lam > 10:
                continue
            p = EepParams(a, b, lam)
            for n in (1, 2, 3):
                single = eep_moment(p, n).value
                double = eep_moment_double_series(p, n)
                rel = abs(single - double) / abs(single)
                if rel > worst:
                    worst, where = rel, (a, b, lam, n)
    ok = worst <= 1e-10 and clock.elapsed < 30.0
    acceptance_line(4, "moment series vs double series", ok,
                    f"max rel diff {worst:.2e} at (a, b, lam, n) = {where} (<= 1e-10), {clock.elapsed:.1f} s (< 30 s)")
    assert ok


def test_criterion_05_series_vs_quadrature(acceptance_line):
    worst, where = 0.0, None
    with Timer() as clock:
        for a, b, lam in GRID:
            p = EepParams(a, b, lam)
            for nu in (0.5, 1.0, 2.0, 2.5, 3.0):
                if not nu > 1 - a:
                    continue
                series = eep_moment(p, nu).value
                quad = eep_moment_quadrature(p, nu).value
                rel = abs(series - quad) / abs(quad)
                if rel > worst:
                    worst, where = rel, (a, b, lam, nu)
    ok = worst <= 1e-8 and clock.elapsed < 60.0
    acceptance_line(5, "moment series vs quadrature", ok,
                    f"max rel err {worst:.2e} at (a, b, lam, nu) = {where} (<= 1e-8), {clock.elapsed:.1f} s (< 60 s)")
    assert ok


def test_criterion_06_ee_closed_form(acceptance_line):
    with Timer() as clock:
        exp_err = max(abs(ee_moment(EeParams(1.0, b), nu) * b ** nu / math.gamma(nu + 1) - 1)
                      for b in BETAS for nu in (0.3, 0.5, 1.0, 1.7, 2.0, 3.0, 4.5))
        mean_err = abs(ee_moment(EeParams(2.0, 1.0), 1.0) - 1.5)
        gk_err = max(abs(ee_moment_gupta_kundu(EeParams(a, b), n) / ee_moment(EeParams(a, b), n) - 1)
                     for a in ALPHAS for b in BETAS for n in (1, 2, 3, 4))
    ok = exp_err <= 1e-12 and mean_err <= 1e-10 and gk_err <= 1e-10 and clock.elapsed < 10.0
    acceptance_line(6, "EE closed form", ok,
                    f"alpha=1 rel err {exp_err:.2e} (<= 1e-12); |E - 1.5| = {mean_err:.2e} (<= 1e-10); "
                    f"Gupta-Kundu rel diff {gk_err:.2e} (<= 1e-10); {clock.elapsed:.2f} s (< 10 s)")
    assert ok


def test_criterion_07_physical_model(acceptance_line):
    failures, worst = [], 0.0
    with Timer() as clock:
        for k in (1, 2, 3, 5):
            for b in (0.5, 1.0):
                for lam in (0.5, 1.0, 5.0):
                    rep = run_ks_validation(SystemSpec(k, b, lam), 10 ** 6, seed=2024)
                    worst = max(worst, rep.ks_distance / rep.critical_value_1pct)
                    if not rep.passed:
                        failures.append((k, b, lam, rep.ks_distance))
    ok = not failures and clock.elapsed < 180.0
    acceptance_line(7, "simulated lifetimes vs cdf (KS, 1%)", ok,
                    f"{24 - len(failures)}/24 pass, max D/critical = {worst:.3f}, {clock.elapsed:.1f} s (< 180 s)")
    assert ok


def test_criterion_08_quantile_round_trip(acceptance_line):
    us = np.array([1e-4, 0.01, 0.5, 0.99, 1 - 1e-4])
    with Timer() as clock:
        worst = max(float(np.max(np.abs(eep_cdf(p, eep_quantile(p, us)) - us)))
                    for p in (EepParams(*g) for g in GRID))
    ok = worst <= 1e-10 and clock.elapsed < 5.0
    acceptance_line(8, "quantile round trip", ok,
                    f"max |F(Q(u)) - u| = {worst:.2e} (<= 1e-10), {clock.elapsed:.2f} s (< 5 s)")
    assert ok


def test_criterion_09_tail_behaviour(acceptance_line):
    lower, upper = 0.0, 0.0
    with Timer() as clock:
        for a, b, lam in GRID:
            p = EepParams(a, b, lam)
            norm = -math.expm1(-lam)
            x = 1e-6 / b
            lower = max(lower, abs(eep_cdf(p, x) / (lam * (b * x) ** a / norm) - 1))
            x = 30.0 / b
            upper = max(upper, abs(eep_survival(p, x) / (lam * a * math.exp(-lam) * math.exp(-b * x) / norm) - 1))
    ok = lower <= 0.01 and upper <= 0.01 and clock.elapsed < 5.0
    acceptance_line(9, "tail asymptotics", ok,
                    f"max |ratio - 1|: lower {lower:.2e}, upper {upper:.2e} (<= 1e-2), {clock.elapsed:.2f} s (< 5 s)")
    assert ok


def test_criterion_10_goyal_laddha_series_vs_integral(acceptance_line):
    checked, bad, worst = 0, [], 0.0
    with Timer() as clock:
        for mu in (-2.0, -0.5, 0.0, 0.5, 1.0):
            for s in (1.5, 2.0, 4.0):
                for z in (0.3, 1.0):
                    if z == 1.0 and not s - mu > 1:
                        continue
                    args = HlzStarArgs(mu, z, s, 1.0)
                    ser, itg = goyal_laddha_phi_star(args), goyal_laddha_integral(args)
                    diff = abs(ser.value - itg.value)
                    budget = ser.abs_error_estimate + itg.abs_error_estimate
                    checked += 1
                    worst = max(worst, diff / budget if budget else (0.0 if diff == 0 else math.inf))
                    if diff > budget:
                        bad.append((mu, s, z, diff, budget))
    ok = not bad and clock.elapsed < 30.0
    acceptance_line(10, "Goyal-Laddha series vs integral", ok,
                    f"{checked - len(bad)}/{checked} within combined error estimate (max diff/budget {worst:.2f}), "
                    f"{clock.elapsed:.2f} s (< 30 s)")
    assert ok


def test_criterion_11_sampling_moments(acceptance_line):
    p = EepParams(2.0, 1.0, 1.0)
    n = 10 ** 6
    with Timer() as clock:
        x = eep_sample(p, n, seed=99).values
        mean, var = eep_mean_variance(p)
        m = [eep_moment(p, k).value for k in (1, 2, 3, 4)]
        central4 = m[3] - 4 * mean * m[2] + 6 * mean ** 2 * m[1] - 3 * mean ** 4
        z_mean = (x.mean() - mean) / math.sqrt(var / n)
        z_var = (x.var(ddof=1) - var) / math.sqrt((central4 - var ** 2) / n)
    ok = abs(z_mean) <= 4 and abs(z_var) <= 4 and clock.elapsed < 30.0
    acceptance_line(11, "sampling mean and variance", ok,
                    f"mean z = {z_mean:+.2f}, variance z = {z_var:+.2f} (|z| <= 4), {clock.elapsed:.2f} s (< 30 s)")
    assert ok


def test_criterion_12_fit_recovery(acceptance_line):
    truth = EepParams(2.0, 1.0, 1.0)
    with Timer() as clock:
        x = eep_sample(truth, 10 ** 5, seed=12).values
        res = fit_eep(x)
    errs = [abs(res.params.alpha / 2 - 1), abs(res.params.beta - 1), abs(res.params.lam - 1)]
    ok = res.converged and max(errs) <= 0.05 and clock.elapsed < 120.0
    acceptance_line(12, "fit recovery", ok,
                    f"(a, b, lam) = ({res.params.alpha:.4f}, {res.params.beta:.4f}, {res.params.lam:.4f}), "
                    f"max rel err {max(errs):.3f} (<= 0.05), converged {res.converged}, "
                    f"{clock.elapsed:.1f} s (< 120 s)")
    assert ok
