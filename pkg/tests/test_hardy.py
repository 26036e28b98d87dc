import cmath

import numpy as np
import pytest

from nonloc import (DegenerateSettings, DensityMatrix, JointDistribution,
                    MeasurementSettings, Ray, SymmetricState, born_distribution,
                    construct_hardy_state, dicke_expand, hardy_conditions,
                    inequality1, inequality2, mixed_state_check)
from conftest import random_settings

GHZ3 = dicke_expand(SymmetricState.ghz(3, np.pi / 4))
# shared-parameter settings solving the test on GHZ(pi/4) at x = 2i
GHZ3_SETTINGS = MeasurementSettings.from_shared_params(3, 1 / 16, 1 / 4, 2j, 8j)
GHZ3_P = 72 / 6425


def test_ghz_fixture_passes():
    report = hardy_conditions(born_distribution(GHZ3, GHZ3_SETTINGS))
    assert report.passed
    assert abs(report.p_success - GHZ3_P) < 1e-10
    assert max(report.zero_residuals) < 1e-12


def test_zero_condition_count():
    report = hardy_conditions(born_distribution(GHZ3, GHZ3_SETTINGS))
    assert len(report.zero_residuals) == 2 * 3 - 1


def test_product_state_never_passes(rng):
    amps = np.zeros(8)
    amps[0] = 1.0
    from nonloc import PureState
    psi = PureState(3, amps)
    for _ in range(10):
        report = hardy_conditions(born_distribution(psi, random_settings(3, rng)))
        assert not report.passed


def test_excluded_parameter_gives_zero_success():
    # at |x| = 1 the GHZ construction still satisfies every zero condition
    # but the success probability collapses
    s = MeasurementSettings.from_shared_params(3, -1.0, -1.0, 1.0, 1.0)
    report = hardy_conditions(born_distribution(GHZ3, s))
    assert not report.passed
    assert report.p_success < 1e-12
    assert max(report.zero_residuals) < 1e-12


def test_pivot_validation():
    d = born_distribution(GHZ3, GHZ3_SETTINGS)
    with pytest.raises(ValueError):
        hardy_conditions(d, pivot=0)
    with pytest.raises(ValueError):
        hardy_conditions(d, pivot=4)


def test_inequality1_equals_success_on_passing_table():
    d = born_distribution(GHZ3, GHZ3_SETTINGS)
    assert abs(inequality1(d) - GHZ3_P) < 1e-10


def test_inequality1_on_deterministic_zeros_box():
    p = np.zeros((8, 8))
    p[:, 0] = 1.0
    d = JointDistribution(3, p)
    assert abs(inequality1(d) - (1 - 3)) < 1e-12
    assert abs(inequality2(d) - (1 - 3)) < 1e-12


def test_inequality2_ghz_fixture_value():
    d = born_distribution(GHZ3, GHZ3_SETTINGS)
    assert abs(inequality2(d) - (-0.4706987774273018)) < 1e-10


def test_standard_variant_ghz():
    # identical settings on every party pass the all-ones variant with p = 1/8
    a = Ray.from_param(cmath.exp(-1j * np.pi / 6))
    b = Ray.from_param(-cmath.exp(1j * np.pi / 3))
    s = MeasurementSettings.identical(3, a, b)
    d = born_distribution(GHZ3, s)
    standard = hardy_conditions(d, standard=True)
    assert standard.passed
    assert abs(standard.p_success - 1 / 8) < 1e-10
    assert not hardy_conditions(d).passed


def test_pivot_choice_is_immaterial_for_symmetric_settings():
    # fully permutation-symmetric state and settings: the verdict cannot
    # depend on which party anchors the pairwise conditions
    a = Ray.from_param(cmath.exp(-1j * np.pi / 6))
    b = Ray.from_param(-cmath.exp(1j * np.pi / 3))
    d = born_distribution(GHZ3, MeasurementSettings.identical(3, a, b))
    for standard in (False, True):
        verdicts = {hardy_conditions(d, pivot=k, standard=standard).passed
                    for k in (1, 2, 3)}
        assert len(verdicts) == 1


def test_construct_matches_direct_null_space(rng):
    settings = random_settings(2, rng)
    sub = construct_hardy_state(settings)
    # independent solve: the state orthogonal to the three constraint vectors
    cols = []
    a = [settings.pairs[k][0].ket() for k in (0, 1)]
    b = [settings.pairs[k][1].ket() for k in (0, 1)]
    bbar = [settings.pairs[k][1].orthogonal().ket() for k in (0, 1)]
    cols.append(np.kron(b[0], a[1]))
    cols.append(np.kron(a[0], b[1]))
    cols.append(np.kron(bbar[0], bbar[1]))
    _, _, vh = np.linalg.svd(np.array(cols).conj())
    phi = vh[-1].conj()
    overlap = abs(np.vdot(phi, sub.phi.amplitudes))
    assert abs(overlap - 1.0) < 1e-10


def test_construct_output_passes_conditions(rng):
    for n in (2, 3, 4):
        settings = random_settings(n, rng)
        sub = construct_hardy_state(settings)
        report = hardy_conditions(born_distribution(sub.phi, settings),
                                  delta_pos=0.0)
        assert report.passed
        assert max(report.zero_residuals) < 1e-10


def test_construct_rejects_parallel_settings():
    r = Ray(1.0, 0.5)
    with pytest.raises(DegenerateSettings):
        construct_hardy_state(MeasurementSettings.identical(3, r, r))


def test_mixed_state_check_accepts_the_constructed_state():
    sub = construct_hardy_state(GHZ3_SETTINGS)
    rho = DensityMatrix.from_pure(sub.phi)
    assert mixed_state_check(rho, sub)


def test_mixed_state_check_allows_outside_admixture():
    sub = construct_hardy_state(GHZ3_SETTINGS)
    # mix with a state orthogonal to the whole settings subspace
    _, _, vh = np.linalg.svd(sub.basis.conj().T)
    chi = vh[-1].conj()
    assert np.abs(sub.basis.conj().T @ chi).max() < 1e-10
    phi = sub.phi.amplitudes
    rho = 0.6 * np.outer(phi, phi.conj()) + 0.4 * np.outer(chi, chi.conj())
    assert mixed_state_check(DensityMatrix(3, rho), sub)


def test_mixed_state_check_rejects_in_subspace_admixture():
    sub = construct_hardy_state(GHZ3_SETTINGS)
    other = sub.basis[:, 1] / np.linalg.norm(sub.basis[:, 1])
    phi = sub.phi.amplitudes
    rho = 0.9 * np.outer(phi, phi.conj()) + 0.1 * np.outer(other, other.conj())
    assert not mixed_state_check(DensityMatrix(3, rho), sub)


def test_mixed_state_check_rejects_maximally_mixed():
    sub = construct_hardy_state(GHZ3_SETTINGS)
    assert not mixed_state_check(DensityMatrix(3, np.eye(8) / 8), sub)


def test_mixed_state_check_agrees_with_conditions(rng):
    # states that fail the projector criterion show a nonzero condition when
    # measured; states that satisfy it do not
    sub = construct_hardy_state(GHZ3_SETTINGS)
    phi = sub.phi.amplitudes
    for w in (0.0, 0.3):
        _, _, vh = np.linalg.svd(sub.basis.conj().T)
        chi = vh[-1].conj()
        rho = DensityMatrix(3, (1 - w) * np.outer(phi, phi.conj())
                            + w * np.outer(chi, chi.conj()))
        d = born_distribution(rho, GHZ3_SETTINGS)
        report = hardy_conditions(d, delta_pos=0.0)
        assert mixed_state_check(rho, sub) == (max(report.zero_residuals) < 1e-9)
