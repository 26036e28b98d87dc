"""Closed-form measurement settings for symmetric states.

For a symmetric state with Dicke coefficients h and identical settings
x on parties 2..n, the test conditions collapse onto the two-qubit vector
(c0, c1, c1, c2) with

    c_i(x) = sum_k h_{k+i} C(n-2, k) x^k,   i = 0, 1, 2,

and the remaining parameters follow by three division formulas.  The x values
to avoid are the roots of c1^2 - c0*c2 (degenerate reduced state) and, along a
ray of fixed phase, the roots of the success-probability polynomial F.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import (DegenerateX, IdenticallyZeroF, IdenticallyZeroPolynomial,
                     NotEntangled, NumericalFailure, SingularDenominator)
from .measure import MeasurementSettings, born_distribution
from .hardy import hardy_conditions
from .qstate import SymmetricState, dicke_expand, genuine_entanglement_check, to_magic_basis

_EXCLUSION_MARGIN = 1e-6


@dataclass(frozen=True)
class CCoeffs:
    """The three reduced coefficients c0, c1, c2 at one setting parameter x."""

    c0: complex
    c1: complex
    c2: complex


@dataclass(frozen=True, eq=False)
class SymmetricSolution:
    """Settings parameters solving the test for one symmetric state."""

    x: complex
    y1: complex
    y: complex
    x1: complex
    settings: MeasurementSettings
    p_success: float
    excluded_x: tuple[float, ...]


def _c_poly(s: SymmetricState, i: int) -> np.ndarray:
    """Ascending coefficient array of c_i as a polynomial in x."""
    n = s.n
    return np.array([s.h[k + i] * math.comb(n - 2, k) for k in range(n - 1)],
                    dtype=complex)


def c_coeffs(s: SymmetricState, x: complex) -> CCoeffs:
    """Evaluate the three reduced coefficients at x."""
    if s.n < 3:
        raise ValueError("reduced coefficients require at least 3 parties")
    return CCoeffs(*(complex(npoly.polyval(x, _c_poly(s, i))) for i in range(3)))


def _trim(coeffs: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    nz = np.nonzero(np.abs(coeffs) >= tol)[0]
    if nz.size == 0:
        return np.zeros(0, dtype=coeffs.dtype)
    return coeffs[: nz[-1] + 1]


def _polished_roots(coeffs: np.ndarray) -> np.ndarray:
    """Companion-matrix roots with two Newton correction steps each."""
    roots = npoly.polyroots(coeffs)
    deriv = npoly.polyder(coeffs)
    for _ in range(2):
        num = npoly.polyval(roots, coeffs)
        den = npoly.polyval(roots, deriv)
        safe = np.abs(den) > 1e-300
        roots = np.where(safe, roots - num / np.where(safe, den, 1.0), roots)
    return roots


def degenerate_x_roots(s: SymmetricState) -> tuple[complex, ...]:
    """Roots of c1^2 - c0*c2, where the reduced two-qubit state degenerates."""
    p = npoly.polysub(npoly.polymul(_c_poly(s, 1), _c_poly(s, 1)),
                      npoly.polymul(_c_poly(s, 0), _c_poly(s, 2)))
    p = _trim(p)
    if p.size == 0:
        raise IdenticallyZeroPolynomial("c1^2 - c0*c2 vanishes identically")
    if p.size == 1:
        return ()
    roots = _polished_roots(p)
    for r in roots:
        c = c_coeffs(s, r)
        m = np.array([[c.c0, c.c1], [c.c1, c.c2]])
        if np.linalg.svd(m, compute_uv=False)[1] >= 1e-8:
            raise NumericalFailure(f"degeneracy root {r} fails the rank-1 check")
    order = np.argsort(np.abs(roots), kind="stable")
    return tuple(complex(r) for r in roots[order])


def _f_poly_coeffs(s: SymmetricState, w: float) -> np.ndarray:
    """Coefficients in t of F(t e^{iw}, t e^{-iw}) where F is the
    success-probability numerator polynomial

        F = c1 c2* + c0 c1* + (|c2|^2 - |c0|^2) x - (c1* c2 + c0* c1) x^2.
    """
    e = cmath.exp(1j * w)
    polys = [_c_poly(s, i) for i in range(3)]
    fwd = [c * e ** np.arange(c.size) for c in polys]
    rev = [np.conj(c) * np.conj(e) ** np.arange(c.size) for c in polys]
    f = npoly.polyadd(npoly.polymul(fwd[1], rev[2]), npoly.polymul(fwd[0], rev[1]))
    lin = npoly.polysub(npoly.polymul(fwd[2], rev[2]), npoly.polymul(fwd[0], rev[0]))
    f = npoly.polyadd(f, e * npoly.polymulx(lin))
    quad = npoly.polyadd(npoly.polymul(rev[1], fwd[2]), npoly.polymul(rev[0], fwd[1]))
    f = npoly.polysub(f, e ** 2 * npoly.polymulx(npoly.polymulx(quad)))
    return np.asarray(f, dtype=complex)


def f_poly_roots(s: SymmetricState, w: float) -> tuple[float, ...]:
    """Nonnegative real t at which F(t e^{iw}) = 0, i.e. the moduli along the
    phase-w ray where the constructed success probability vanishes."""
    f = _f_poly_coeffs(s, w)
    if np.abs(f).max() < 1e-12:
        raise IdenticallyZeroF(f"F vanishes identically at phase {w}")
    candidates: list[float] = []
    for part in (_trim(f.real.copy()), _trim(f.imag.copy())):
        if part.size <= 1:
            continue
        for r in _polished_roots(part):
            if abs(r.imag) <= 1e-8 * (1.0 + abs(r.real)) and r.real >= -1e-10:
                candidates.append(max(float(r.real), 0.0))
    roots: list[float] = []
    for t in sorted(candidates):
        scale = float(np.abs(f) @ np.maximum(t, 1.0) ** np.arange(f.size))
        if abs(npoly.polyval(t, f)) > 1e-8 * scale:
            continue
        if roots and abs(t - roots[-1]) < 1e-8:
            continue
        roots.append(t)
    return tuple(roots)


def phase_pick(s: SymmetricState) -> float:
    """A phase w for the setting ray x = t e^{iw} such that F does not vanish
    identically: h0 h2* e^{-2iw} is made purely imaginary; for h2 = 0 the
    convention w = pi/2 is returned."""
    h0, h2 = s.h[0], s.h[2]
    if abs(h2) < 1e-12:
        return math.pi / 2
    w = 0.5 * (cmath.phase(h0 * np.conj(h2)) + math.pi / 2)
    return w % (2 * math.pi)


def phase_admissibility(s: SymmetricState, w: float) -> tuple[bool, bool]:
    """Diagnostic pair for a candidate phase: whether h0 h2* e^{-2iw} is
    non-real (the criterion consistent with x^2 carrying phase 2w), and the
    same question for h0* h2 e^{-iw} (the first-order variant)."""
    h0, h2 = complex(s.h[0]), complex(np.conj(s.h[2]))

    def nonreal(z: complex) -> bool:
        return abs(z.imag) > 1e-12 * max(1.0, abs(z))

    return (nonreal(h0 * h2 * cmath.exp(-2j * w)),
            nonreal(np.conj(h0) * np.conj(h2) * cmath.exp(-1j * w)))


def _guard_x(s: SymmetricState, x: complex, margin: float) -> tuple[float, ...]:
    """Raise DegenerateX when x sits within margin of an excluded value;
    returns the excluded moduli for the solution record."""
    deg = degenerate_x_roots(s)
    for r in deg:
        if abs(x - r) < margin:
            raise DegenerateX(f"x = {x} is within {margin} of degeneracy root {r}")
    try:
        fr = f_poly_roots(s, cmath.phase(x))
    except IdenticallyZeroF as exc:
        raise DegenerateX(
            f"success probability vanishes identically along the phase of x = {x}"
        ) from exc
    for t in fr:
        if abs(abs(x) - t) < margin:
            raise DegenerateX(f"|x| = {abs(x)} is within {margin} of excluded modulus {t}")
    return tuple(sorted({abs(r) for r in deg} | set(fr)))


def _safe_div(num: complex, den: complex, what: str) -> complex:
    if abs(den) < 1e-12:
        raise SingularDenominator(f"denominator of {what} is {abs(den):.3e}")
    return num / den


def solve_settings(s: SymmetricState, x: complex,
                   margin: float = _EXCLUSION_MARGIN) -> SymmetricSolution:
    """Solve the three zero conditions for the remaining parameters at a given x.

    The assembled rays are |a_1> = |0> + x1*|1>, |b_1> = |0> + y1*|1>, and
    |a_k> = |0> + x*|1>, |b_k> = |0> + y*|1> on every other party.
    """
    excluded = _guard_x(s, x, margin)
    c = c_coeffs(s, x)
    y1 = _safe_div(-(c.c0 + x * c.c1), c.c1 + x * c.c2, "y1")
    y = _safe_div(np.conj(c.c2) - y1 * np.conj(c.c1),
                  np.conj(c.c1) - y1 * np.conj(c.c0), "y")
    x1 = _safe_div(-(c.c0 + y * c.c1), c.c1 + y * c.c2, "x1")

    psi12 = np.array([c.c0, c.c1, c.c1, c.c2])
    rest_norm = (1.0 + abs(x) ** 2) ** (s.n - 2)
    succ = psi12 @ np.array([1.0, x, x1, x1 * x])
    p_success = float(abs(succ) ** 2 /
                      ((1 + abs(x1) ** 2) * (1 + abs(x) ** 2) * rest_norm))
    zero_max = _validate_solution(psi12, x, y1, y, x1, rest_norm)
    if zero_max >= 1e-10:
        raise NumericalFailure(f"assembled settings leave residual {zero_max:.3e}")
    if p_success <= 0.0:
        raise NumericalFailure("assembled settings give zero success probability")
    settings = MeasurementSettings.from_shared_params(s.n, x1, y1, x, y)
    return SymmetricSolution(complex(x), complex(y1), complex(y), complex(x1),
                             settings, p_success, excluded)


def _validate_solution(psi12: np.ndarray, x, y1, y, x1, rest_norm: float) -> float:
    """Largest of the three zero-condition probabilities on the reduced state."""

    def prob_bra(u0, u1, v0, v1) -> float:
        bra = np.array([np.conj(u0) * np.conj(v0), np.conj(u0) * np.conj(v1),
                        np.conj(u1) * np.conj(v0), np.conj(u1) * np.conj(v1)])
        val = abs(bra @ psi12) ** 2
        nrm = (abs(u0) ** 2 + abs(u1) ** 2) * (abs(v0) ** 2 + abs(v1) ** 2) * rest_norm
        return float(val / nrm)

    b1 = (1.0, np.conj(y1))
    b = (1.0, np.conj(y))
    a1 = (1.0, np.conj(x1))
    a = (1.0, np.conj(x))
    b1o = (-y1, 1.0)
    bo = (-y, 1.0)
    return max(prob_bra(*b1, *a), prob_bra(*a1, *b), prob_bra(*b1o, *bo))


def ghz_closed_form(n: int, theta: float, x: complex) -> float:
    """Success probability of the solved settings on a GHZ(theta) state."""
    if n < 3:
        raise ValueError("GHZ closed form requires at least 3 parties")
    if x == 0:
        raise ValueError("x must be nonzero")
    tan = math.tan(theta)
    if abs(tan) < 1e-300:
        raise ValueError("theta gives a product state")
    ax = abs(x) ** (2 * n - 4)
    x1 = 1.0 / (-(tan ** 3) * ax * x ** (n - 1))
    num = math.cos(theta) ** 2 * (1.0 - 1.0 / (tan * tan * ax)) ** 2
    den = (1.0 + abs(x1) ** 2) * (1.0 + abs(x) ** 2) ** (n - 1)
    return float(num / den)


def w_closed_form(n: int, x: complex) -> float:
    """Success probability of the solved settings on the n-party W state."""
    if n < 3:
        raise ValueError("W closed form requires at least 3 parties")
    y = x * (n - 1) / (1.0 + (n - 1) * (n - 2) * abs(x) ** 2)
    x1 = -x * (n - 2) - y
    num = abs(x - y) ** 2
    den = n * (1.0 + abs(x1) ** 2) * (1.0 + abs(x) ** 2) ** (n - 1)
    return float(num / den)


def _pick_modulus(excluded, margin: float = 0.05) -> float:
    """First scan value (1.0, 1.1, 0.9, ...) clear of every excluded modulus,
    falling back to midpoints of the gaps between excluded values."""
    candidates = [1.0]
    for step in range(1, 20):
        candidates.extend([1.0 + 0.1 * step, 1.0 - 0.1 * step])
    pts = sorted(t for t in excluded if t > 0)
    if pts:
        candidates.append(pts[-1] + 1.0)
        candidates.extend((lo + hi) / 2 for lo, hi in zip(pts, pts[1:]))
    for t in candidates:
        if t >= 0.1 and all(abs(t - e) >= margin for e in excluded):
            return t
    raise NumericalFailure("no admissible setting modulus found")


def solve_auto(s: SymmetricState, entanglement_eps: float = 1e-8) -> SymmetricSolution:
    """End-to-end solver: rotate to the magic basis, pick an admissible phase
    and modulus, solve, rotate the settings back, and verify the conditions on
    the original state."""
    if s.n < 3:
        raise ValueError("symmetric solver requires at least 3 parties")
    psi = dicke_expand(s)
    if not genuine_entanglement_check(psi, entanglement_eps):
        raise NotEntangled("state is within eps of a product across some cut")
    sm, u = to_magic_basis(s)
    w = phase_pick(sm)
    try:
        deg = degenerate_x_roots(sm)
    except IdenticallyZeroPolynomial as exc:
        raise NotEntangled("state is a symmetric product state") from exc
    fr = f_poly_roots(sm, w)
    excluded = tuple(sorted({abs(r) for r in deg} | set(fr)))
    t = _pick_modulus(excluded)
    sol = solve_settings(sm, t * cmath.exp(1j * w))
    settings = sol.settings.transformed(u.conj().T)
    report = hardy_conditions(born_distribution(psi, settings), pivot=1,
                              eps_zero=1e-8, delta_pos=1e-10)
    if not report.passed:
        raise NumericalFailure(
            f"rotated-back settings fail verification "
            f"(p = {report.p_success:.3e}, max residual {max(report.zero_residuals):.3e})")
    return SymmetricSolution(sol.x, sol.y1, sol.y, sol.x1, settings,
                             report.p_success, excluded)
