import math

import numpy as np
import pytest

from anelor.basis import QuadratureRule
from anelor.params import PhysicalParams
from anelor.projection import (
    TERM_NAMES,
    GalerkinCoeffs,
    QuadratureConvergenceError,
    closed_form_coefficients,
    coefficients,
    discrepancy_report,
    expm1_over,
    oracle_coefficients,
    published_coefficients,
)

ROOT2 = math.sqrt(2.0)

# the full coefficient agreement grid: 6 betas x 2 Prandtl x 2 gamma x 3 widths
BETAS = (0.0, 0.01, 0.1, 0.5, 1.0, 2.0)
PRANDTLS = (1.0, 10.0)
GAMMAS = (1.0 / 3.0, 4.0 / 3.0)
LENGTHS = (2.0, 2.0 * ROOT2, 4.0)

# frozen quadrature-oracle outputs (order 64)
ORACLE_BETA0 = np.array([
    -148.0440660163404, 52.72170145763633, 5.868501888018821,
    -14.80440660163404, 78.05135051088101, -5.868501888018816,
    -39.47841760435743,
])
ORACLE_BETA07 = np.array([
    -21.53356301958857, 3.1013396134397127, 8.3818569231811,
    -22.613804528315033, 79.11416154229592, -8.227718600780602,
    -54.89435738020777,
])
PUBLISHED_BETA05 = np.array([
    -26.118963364424776, 1.5865260341795018, 44.59816030175036,
    -25.16245992869916, 40.17450278549427, -11.057406937892917,
    -50.16695662876353,
])


def rel_dev(a, b):
    return np.abs(a - b) / np.maximum.reduce([np.abs(a), np.abs(b),
                                              np.full_like(a, 1e-8)])


def test_expm1_over_series_branch_is_smooth():
    assert expm1_over(0.0) == 1.0
    for x in (1e-7, -1e-7, 9.999e-7):
        assert expm1_over(x) == pytest.approx(np.expm1(x) / x, rel=1e-14)
    assert expm1_over(2.0) == pytest.approx((math.e**2 - 1.0) / 2.0, rel=1e-15)


@pytest.mark.parametrize("beta", BETAS)
@pytest.mark.parametrize("length", LENGTHS)
def test_oracle_matches_closed_form_across_grid(beta, length):
    for prandtl in PRANDTLS:
        for gamma in GAMMAS:
            params = PhysicalParams(beta=beta, prandtl=prandtl, rayleigh=321.0,
                                    gamma=gamma, length=length)
            oracle = oracle_coefficients(params).as_array()
            closed = closed_form_coefficients(params).as_array()
            assert np.max(rel_dev(oracle, closed)) < 1e-8


def test_frozen_oracle_values_beta0():
    params = PhysicalParams(beta=0.0, prandtl=10.0, rayleigh=1234.5,
                            gamma=4.0 / 3.0, length=2.0 * ROOT2)
    got = oracle_coefficients(params).as_array()
    assert np.max(np.abs(got - ORACLE_BETA0) / np.abs(ORACLE_BETA0)) < 1e-13


def test_frozen_oracle_values_beta07():
    params = PhysicalParams(beta=0.7, prandtl=0.9, rayleigh=500.0,
                            gamma=1.2, length=2.5)
    got = oracle_coefficients(params).as_array()
    assert np.max(np.abs(got - ORACLE_BETA07) / np.abs(ORACLE_BETA07)) < 1e-13


def test_classic_limit_values():
    # beta = 0, l = 2 sqrt(2): e1 = -Pr*mu, e4 = -mu with mu = 3 pi^2/2,
    # e7 = -4 pi^2, e2 = 2 pi Pr sqrt(Ra)/(mu l), e5 = 2 pi sqrt(Ra)/l
    params = PhysicalParams(beta=0.0, prandtl=10.0, rayleigh=657.5113644795163,
                            gamma=4.0 / 3.0, length=2.0 * ROOT2)
    mu = 1.5 * math.pi**2
    c = closed_form_coefficients(params)
    assert c.e1 == pytest.approx(-10.0 * mu, rel=1e-14)
    assert c.e4 == pytest.approx(-mu, rel=1e-14)
    assert c.e7 == pytest.approx(-4.0 * math.pi**2, rel=1e-14)
    sqrt_ra = math.sqrt(params.rayleigh)
    assert c.e2 == pytest.approx(2.0 * math.pi * 10.0 * sqrt_ra / (mu * params.length),
                                 rel=1e-14)
    assert c.e5 == pytest.approx(2.0 * math.pi * sqrt_ra / params.length, rel=1e-14)


def test_rayleigh_enters_only_as_sqrt_factor():
    base = PhysicalParams(beta=0.4, prandtl=7.0, rayleigh=100.0, gamma=1.0,
                          length=3.0)
    low = closed_form_coefficients(base).as_array()
    high = closed_form_coefficients(base.with_rayleigh(400.0)).as_array()
    # e2, e5 double when Ra quadruples; the rest do not move
    assert high[1] == pytest.approx(2.0 * low[1], rel=1e-14)
    assert high[4] == pytest.approx(2.0 * low[4], rel=1e-14)
    for k in (0, 2, 3, 5, 6):
        assert high[k] == low[k]


def test_prandtl_and_gamma_touch_only_the_momentum_row():
    base = PhysicalParams(beta=0.6, prandtl=1.0, rayleigh=200.0, gamma=1.0,
                          length=2.0)
    ref = closed_form_coefficients(base).as_array()
    bumped_pr = closed_form_coefficients(
        PhysicalParams(beta=0.6, prandtl=3.0, rayleigh=200.0, gamma=1.0,
                       length=2.0)).as_array()
    assert bumped_pr[0] == pytest.approx(3.0 * ref[0], rel=1e-14)
    assert bumped_pr[1] == pytest.approx(3.0 * ref[1], rel=1e-14)
    assert np.array_equal(bumped_pr[2:], ref[2:])
    bumped_gamma = closed_form_coefficients(
        PhysicalParams(beta=0.6, prandtl=1.0, rayleigh=200.0, gamma=2.0,
                       length=2.0)).as_array()
    assert bumped_gamma[0] != ref[0]
    assert np.array_equal(bumped_gamma[1:], ref[1:])


@pytest.mark.parametrize("beta", BETAS)
def test_sign_structure(beta):
    for length in LENGTHS:
        params = PhysicalParams(beta=beta, prandtl=10.0, rayleigh=50.0,
                                gamma=4.0 / 3.0, length=length)
        c = closed_form_coefficients(params)
        assert c.e1 < 0.0 and c.e4 < 0.0 and c.e7 < 0.0
        assert c.e2 > 0.0 and c.e5 > 0.0
        assert c.e3 * c.e6 < 0.0


@pytest.mark.parametrize("field", ["e4", "e7"])
def test_beta_to_zero_continuity_is_linear(field):
    params0 = PhysicalParams(beta=0.0, prandtl=10.0, rayleigh=0.0,
                             gamma=4.0 / 3.0, length=2.0 * ROOT2)
    at0 = getattr(closed_form_coefficients(params0), field)
    gaps = []
    for beta in (1e-2, 5e-3, 2.5e-3):
        gaps.append(abs(getattr(
            closed_form_coefficients(params0.with_beta(beta)), field) - at0))
    # halving beta halves the gap (within 2 percent)
    assert gaps[0] / gaps[1] == pytest.approx(2.0, rel=0.02)
    assert gaps[1] / gaps[2] == pytest.approx(2.0, rel=0.02)


def test_momentum_nonlinearity_projects_to_zero():
    for beta in (0.0, 0.5):
        params = PhysicalParams(beta=beta, prandtl=10.0, rayleigh=0.0,
                                gamma=4.0 / 3.0, length=2.0 * ROOT2)
        rows = {r.term: r for r in discrepancy_report(params)}
        assert abs(rows["nonlinear-omega"].oracle) < 1e-10
        assert rows["nonlinear-omega"].closed_form == 0.0


def test_published_route_is_a_literal_transcription():
    params = PhysicalParams(beta=0.5, prandtl=1.0, rayleigh=100.0,
                            gamma=4.0 / 3.0, length=2.0)
    got = published_coefficients(params).as_array()
    assert np.max(np.abs(got - PUBLISHED_BETA05) / np.abs(PUBLISHED_BETA05)) < 1e-13


def test_published_route_deviations_are_reported_not_reconciled():
    # the printed AC coefficient is 4x the projected value at beta = 0, and
    # the printed momentum row drifts once beta > 0; both stay report-only
    params = PhysicalParams(beta=0.0, prandtl=10.0, rayleigh=657.51,
                            gamma=4.0 / 3.0, length=2.0 * ROOT2)
    rows = {r.term: r for r in discrepancy_report(params)}
    assert rows["e3"].published / rows["e3"].oracle == pytest.approx(4.0, rel=1e-12)
    assert rows["e3"].rel_dev_published == pytest.approx(0.75, rel=1e-10)
    assert rows["e3"].rel_dev_closed_form < 1e-10
    lifted = {r.term: r for r in discrepancy_report(params.with_beta(0.5))}
    assert lifted["e1"].rel_dev_published > 1e-6
    assert lifted["e1"].rel_dev_closed_form < 1e-10


def test_report_covers_every_term_and_coefficient():
    params = PhysicalParams(beta=1.0, prandtl=10.0, rayleigh=300.0,
                            gamma=4.0 / 3.0, length=2.0 * ROOT2)
    rows = discrepancy_report(params)
    names = [r.term for r in rows]
    assert names[:12] == list(TERM_NAMES)
    assert names[12:] == [f"e{k}" for k in range(1, 8)]
    for row in rows:
        record = row.to_dict()
        assert set(record) == {"term", "oracle", "closed_form", "published",
                               "rel_dev", "rel_dev_closed_form",
                               "rel_dev_published"}
    closed_devs = [r.rel_dev_closed_form for r in rows if r.term.startswith("e")]
    assert max(closed_devs) < 1e-10


def test_report_beta0_closed_column_within_1e10():
    params = PhysicalParams(beta=0.0, prandtl=10.0, rayleigh=100.0,
                            gamma=4.0 / 3.0, length=2.0 * ROOT2)
    for row in discrepancy_report(params):
        assert row.rel_dev_closed_form < 1e-10


def test_oracle_column_stable_under_order_doubling():
    params = PhysicalParams(beta=0.8, prandtl=10.0, rayleigh=120.0,
                            gamma=4.0 / 3.0, length=2.0)
    coarse = oracle_coefficients(params, QuadratureRule(64, params.length))
    fine = oracle_coefficients(params, QuadratureRule(128, params.length))
    assert np.max(rel_dev(coarse.as_array(), fine.as_array())) < 1e-12


def test_convergence_check_passes_at_default_order():
    params = PhysicalParams(beta=0.3, prandtl=10.0, rayleigh=100.0,
                            gamma=4.0 / 3.0, length=2.0 * ROOT2)
    oracle_coefficients(params, check_convergence=True)


def test_convergence_check_rejects_coarse_rule():
    params = PhysicalParams(beta=0.3, prandtl=10.0, rayleigh=100.0,
                            gamma=4.0 / 3.0, length=2.0 * ROOT2)
    with pytest.raises(QuadratureConvergenceError):
        oracle_coefficients(params, QuadratureRule(4, params.length),
                            check_convergence=True)


def test_rule_length_must_match_params():
    params = PhysicalParams(beta=0.0, prandtl=10.0, rayleigh=0.0,
                            gamma=4.0 / 3.0, length=2.0)
    with pytest.raises(ValueError):
        oracle_coefficients(params, QuadratureRule(32, 3.0))


def test_coefficients_dispatch():
    params = PhysicalParams(beta=0.2, prandtl=10.0, rayleigh=100.0,
                            gamma=4.0 / 3.0, length=2.0 * ROOT2)
    assert coefficients(params, "oracle").provenance == "oracle"
    assert coefficients(params, "closed_form").provenance == "closed_form"
    assert coefficients(params, "published").provenance == "published"
    with pytest.raises(ValueError):
        coefficients(params, "guesswork")


def test_galerkin_coeffs_validation():
    params = PhysicalParams(beta=0.0, prandtl=1.0, rayleigh=0.0,
                            gamma=4.0 / 3.0, length=2.0)
    with pytest.raises(ValueError):
        GalerkinCoeffs(1, 1, 1, 1, 1, 1, 1, "folklore", params)
    with pytest.raises(ValueError):
        GalerkinCoeffs(math.nan, 1, 1, 1, 1, 1, 1, "oracle", params)
    coeffs = GalerkinCoeffs(1, 2, 3, 4, 5, 6, 7, "oracle", params)
    assert coeffs.as_dict() == {f"e{k}": float(k) for k in range(1, 8)}
