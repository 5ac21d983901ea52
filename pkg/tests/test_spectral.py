import math

import numpy as np
import pytest

from anelor.basis import QuadratureRule
from anelor.lorenz import critical_rayleigh
from anelor.params import PhysicalParams
from anelor.projection import closed_form_coefficients
from anelor.spectral import (
    LinearOperatorPencil,
    SpectralBracketError,
    assemble_pencil,
    critical_rayleigh_spectral,
    leading_growth_rate,
)

ROOT2 = math.sqrt(2.0)
RA_CLASSIC = 27.0 * math.pi**4 / 4.0


def make_params(beta=0.0, prandtl=10.0, rayleigh=1.0, gamma=4.0 / 3.0,
                length=2.0 * ROOT2):
    return PhysicalParams(beta=beta, prandtl=prandtl, rayleigh=rayleigh,
                          gamma=gamma, length=length)


@pytest.mark.parametrize("beta", [0.0, 0.5, 1.5])
def test_mass_matrix_is_symmetric_positive_definite(beta):
    pencil = assemble_pencil(make_params(beta=beta), n_modes=4)
    n = pencil.n_modes
    assert pencil.mass.shape == (2 * n, 2 * n)
    assert np.array_equal(pencil.mass[:n, :n], np.eye(n))
    assert np.max(np.abs(pencil.mass - pencil.mass.T)) < 1e-14
    assert np.min(np.linalg.eigvalsh(pencil.mass)) > 0.0


def test_mass_matrix_is_identity_without_stratification():
    pencil = assemble_pencil(make_params(beta=0.0), n_modes=4)
    assert np.max(np.abs(pencil.mass - np.eye(8))) < 1e-12


def test_vertical_modes_decouple_without_stratification():
    # at beta = 0 the weight is 1 and distinct sine modes are orthogonal, so
    # every block of the pencil is diagonal up to quadrature roundoff
    pencil = assemble_pencil(make_params(beta=0.0), n_modes=4)
    n = pencil.n_modes
    scale = max(np.max(np.abs(pencil.l0)), np.max(np.abs(pencil.l1)))
    for matrix in (pencil.l0, pencil.l1):
        for block in (matrix[:n, :n], matrix[:n, n:], matrix[n:, :n],
                      matrix[n:, n:]):
            off = block - np.diag(np.diag(block))
            assert np.max(np.abs(off)) <= 1e-12 * scale


@pytest.mark.parametrize("beta", [0.0, 0.5])
def test_single_mode_pencil_reproduces_the_reduced_linear_block(beta):
    # the N = 1 operator at Rayleigh number Ra is [[e1, e2], [e5, e4]]
    rayleigh = 900.0
    coeffs = closed_form_coefficients(make_params(beta=beta, rayleigh=rayleigh))
    pencil = assemble_pencil(make_params(beta=beta), n_modes=1)
    operator = np.linalg.solve(
        pencil.mass, pencil.l0 + math.sqrt(rayleigh) * pencil.l1)
    expected = np.array([[coeffs.e1, coeffs.e2], [coeffs.e5, coeffs.e4]])
    scale = np.max(np.abs(expected))
    assert np.max(np.abs(operator - expected)) < 1e-10 * scale


@pytest.mark.parametrize("beta", [0.0, 0.1, 0.5, 1.0])
def test_single_mode_onset_matches_the_reduced_route(beta):
    params = make_params(beta=beta)
    spectral = critical_rayleigh_spectral(params, n_modes=1)
    reduced = critical_rayleigh(params, "oracle")
    assert abs(spectral - reduced) / reduced < 1e-8


@pytest.mark.parametrize("beta", [0.0, 0.5])
def test_growth_rate_crosses_zero_at_onset(beta):
    params = make_params(beta=beta)
    pencil = assemble_pencil(params, n_modes=1)
    ra_star = critical_rayleigh(params, "closed_form")
    assert leading_growth_rate(pencil, 0.0) < 0.0
    assert abs(leading_growth_rate(pencil, ra_star)) < 1e-8
    assert leading_growth_rate(pencil, 2.0 * ra_star) > 0.0


def test_growth_rate_increases_with_rayleigh():
    pencil = assemble_pencil(make_params(beta=0.3), n_modes=4)
    ra_star = critical_rayleigh_spectral(make_params(beta=0.3), n_modes=4)
    rates = [leading_growth_rate(pencil, f * ra_star)
             for f in (0.25, 0.5, 1.0, 2.0, 4.0)]
    assert all(b > a for a, b in zip(rates, rates[1:]))


def test_extra_modes_are_inert_without_stratification():
    one = critical_rayleigh_spectral(make_params(beta=0.0), n_modes=1)
    eight = critical_rayleigh_spectral(make_params(beta=0.0), n_modes=8)
    assert one == pytest.approx(RA_CLASSIC, rel=1e-9)
    assert abs(eight - one) < 1e-12 * one


def test_truncation_converges_in_mode_count():
    params = make_params(beta=0.2)
    values = [critical_rayleigh_spectral(params, n_modes=n)
              for n in (1, 2, 4, 8)]
    diffs = [abs(b - a) for a, b in zip(values, values[1:])]
    assert diffs[0] > diffs[1] > diffs[2]
    # refined onsets stay within the N = 2 correction of each other
    assert all(abs(v - values[-1]) <= diffs[0] for v in values[1:])


@pytest.mark.parametrize("n_modes", [1, 4, 8])
def test_stratification_raises_the_spectral_onset(n_modes):
    flat = critical_rayleigh_spectral(make_params(beta=0.0), n_modes=n_modes)
    onsets = [critical_rayleigh_spectral(make_params(beta=b), n_modes=n_modes)
              for b in (0.25, 0.5)]
    assert flat < onsets[0] < onsets[1]


def test_assemble_pencil_validates_arguments():
    with pytest.raises(ValueError):
        assemble_pencil(make_params(), n_modes=0)
    with pytest.raises(ValueError):
        assemble_pencil(make_params(), m=0)


def test_convergence_check_rejects_coarse_quadrature():
    coarse = QuadratureRule(4, 2.0 * ROOT2)
    with pytest.raises(ValueError):
        assemble_pencil(make_params(beta=1.0), n_modes=4, rule=coarse,
                        check_convergence=True)
    assemble_pencil(make_params(beta=1.0), n_modes=4, check_convergence=True)


def test_growth_rate_rejects_negative_rayleigh():
    pencil = assemble_pencil(make_params(), n_modes=1)
    with pytest.raises(ValueError):
        leading_growth_rate(pencil, -1.0)


def test_bracket_failures_raise(monkeypatch):
    import anelor.spectral as spectral

    def fake_pencil(mass, l0, l1):
        return LinearOperatorPencil(params=make_params(), m=1, n_modes=1,
                                    mass=mass, l0=l0, l1=l1)

    eye = np.eye(2)
    unstable_at_zero = fake_pencil(eye, eye.copy(), np.zeros((2, 2)))
    monkeypatch.setattr(spectral, "assemble_pencil",
                        lambda *a, **k: unstable_at_zero)
    with pytest.raises(SpectralBracketError):
        critical_rayleigh_spectral(make_params())

    never_unstable = fake_pencil(eye, -eye, np.zeros((2, 2)))
    monkeypatch.setattr(spectral, "assemble_pencil",
                        lambda *a, **k: never_unstable)
    with pytest.raises(SpectralBracketError):
        critical_rayleigh_spectral(make_params())
