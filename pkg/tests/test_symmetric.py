import cmath
import math

import numpy as np
import pytest

from nonloc import (DegenerateX, IdenticallyZeroPolynomial, NotEntangled,
                    SymmetricState, born_distribution, c_coeffs,
                    degenerate_x_roots, dicke_expand, f_poly_roots,
                    ghz_closed_form, hardy_conditions, phase_admissibility,
                    phase_pick, solve_auto, solve_settings, w_closed_form)
from conftest import random_symmetric

GHZ34 = SymmetricState.ghz(3, np.pi / 4)
W3 = SymmetricState.w(3)


def test_c_coeffs_ghz():
    c = c_coeffs(GHZ34, 2j)
    assert abs(c.c0 - 1 / math.sqrt(2)) < 1e-12
    assert abs(c.c1) < 1e-12
    assert abs(c.c2 - 2j / math.sqrt(2)) < 1e-12


def test_c_coeffs_w():
    c = c_coeffs(W3, 1.0)
    assert abs(c.c0 - 1 / math.sqrt(3)) < 1e-12
    assert abs(c.c1 - 1 / math.sqrt(3)) < 1e-12
    assert abs(c.c2) < 1e-12


def test_degenerate_roots_ghz():
    roots = degenerate_x_roots(GHZ34)
    assert len(roots) == 1
    assert abs(roots[0]) < 1e-10


def test_degenerate_roots_w_empty():
    assert degenerate_x_roots(W3) == ()


def test_degenerate_roots_product_state_raises():
    h = np.array([1.0, 0.5, 0.25, 0.125])
    with pytest.raises(IdenticallyZeroPolynomial):
        degenerate_x_roots(SymmetricState(3, h))


def test_f_roots_ghz_vertical_phase():
    roots = f_poly_roots(GHZ34, np.pi / 2)
    assert any(abs(t - 1.0) < 1e-8 for t in roots)
    assert all(t >= 0 for t in roots)


def test_phase_pick_vertical_when_h2_vanishes():
    assert abs(phase_pick(GHZ34) - np.pi / 2) < 1e-12


def test_phase_pick_centers_the_product(rng):
    for _ in range(10):
        s = random_symmetric(4, rng, entangled=False)
        if abs(s.h[2]) < 1e-6:
            continue
        w = phase_pick(s)
        z = s.h[0] * np.conj(s.h[2]) * cmath.exp(-2j * w)
        assert abs(z.real) < 1e-10 * abs(z)


def test_phase_admissibility_flags():
    ok2, _ = phase_admissibility(GHZ34, phase_pick(GHZ34))
    # h2 = 0 makes the product vanish, so the nonreality flag is off
    assert not ok2


def test_solver_fixture_ghz():
    sol = solve_settings(GHZ34, 2j)
    assert abs(sol.y1 - 0.25) < 1e-12
    assert abs(sol.y - 8j) < 1e-12
    assert abs(sol.x1 - 0.0625) < 1e-12
    assert abs(sol.p_success - 72 / 6425) < 1e-12


def test_solver_fixture_w():
    sol = solve_settings(W3, 1.0)
    assert abs(sol.y1 - (-2.0)) < 1e-12
    assert abs(sol.y - 2 / 3) < 1e-12
    assert abs(sol.x1 - (-5 / 3)) < 1e-12
    assert abs(sol.p_success - 1 / 408) < 1e-12


def test_solver_fixtures_verified_by_tensor_oracle():
    for s, x, p in ((GHZ34, 2j, 72 / 6425), (W3, 1.0, 1 / 408)):
        sol = solve_settings(s, x)
        report = hardy_conditions(born_distribution(dicke_expand(s), sol.settings),
                                  eps_zero=1e-10, delta_pos=1e-12)
        assert report.passed
        assert abs(report.p_success - p) < 1e-10


def test_excluded_x_raises():
    with pytest.raises(DegenerateX):
        solve_settings(GHZ34, 1.0)
    with pytest.raises(DegenerateX):
        solve_settings(GHZ34, 1e-8 + 1e-8j)


def test_excluded_moduli_recorded():
    sol = solve_settings(GHZ34, 2j)
    assert any(abs(t) < 1e-8 for t in sol.excluded_x)
    assert any(abs(t - 1.0) < 1e-8 for t in sol.excluded_x)


def test_ghz_closed_form_matches_solver_and_tensor():
    for n in (3, 4, 5):
        for theta in (np.pi / 8, np.pi / 3):
            s = SymmetricState.ghz(n, theta)
            x = 0.7 + 1.1j
            p = ghz_closed_form(n, theta, x)
            sol = solve_settings(s, x)
            assert abs(p - sol.p_success) < 1e-12
            # direct kron evaluation of the success probability
            a1 = np.array([1.0, np.conj(sol.x1)])
            a = np.array([1.0, np.conj(x)])
            bra = a1
            for _ in range(n - 1):
                bra = np.kron(bra, a)
            amp = np.vdot(bra, dicke_expand(s).amplitudes)
            norms = (1 + abs(sol.x1) ** 2) * (1 + abs(x) ** 2) ** (n - 1)
            assert abs(p - abs(amp) ** 2 / norms) < 1e-10


def test_ghz_closed_form_zero_case():
    for n in (3, 4):
        theta = np.pi / 8
        t = 1 / math.tan(theta) ** (1 / (n - 2))
        assert abs(ghz_closed_form(n, theta, t * 1j)) < 1e-12


def test_w_closed_form_matches_solver():
    for n in (3, 4, 5):
        s = SymmetricState.w(n)
        x = 0.4 - 0.9j
        sol = solve_settings(s, x)
        assert abs(w_closed_form(n, x) - sol.p_success) < 1e-12


def test_w_closed_form_zero_case():
    for n in (3, 4, 5):
        t = math.sqrt(1 / (n - 1))
        assert abs(w_closed_form(n, t)) < 1e-12


def test_solve_auto_ghz_end_to_end():
    sol = solve_auto(GHZ34)
    report = hardy_conditions(born_distribution(dicke_expand(GHZ34), sol.settings),
                              eps_zero=1e-8, delta_pos=1e-10)
    assert report.passed
    assert abs(report.p_success - sol.p_success) < 1e-12


def test_solve_auto_w_end_to_end():
    sol = solve_auto(W3)
    report = hardy_conditions(born_distribution(dicke_expand(W3), sol.settings),
                              eps_zero=1e-8, delta_pos=1e-10)
    assert report.passed


def test_solve_auto_avoids_excluded_moduli():
    sol = solve_auto(GHZ34)
    for t in sol.excluded_x:
        assert abs(abs(sol.x) - t) > 0.04


def test_solve_auto_rejects_product_state():
    h = np.array([1.0, 0.5, 0.25, 0.125])
    with pytest.raises(NotEntangled):
        solve_auto(SymmetricState(3, h))


def test_solve_auto_rejects_two_parties():
    with pytest.raises(ValueError):
        solve_auto(SymmetricState.ghz(2, np.pi / 4))


def test_solve_auto_random_states(rng):
    for n in (3, 4, 5):
        for _ in range(10):
            s = random_symmetric(n, rng)
            sol = solve_auto(s)
            report = hardy_conditions(
                born_distribution(dicke_expand(s), sol.settings),
                eps_zero=1e-8, delta_pos=1e-10)
            assert report.passed
