"""The 2n-condition inequality-free test of genuine n-way nonlocality,
its two Bell-type inequalities, and the subspace construction that yields
a passing state for given measurement rays.

Conditions, for a pivot party k' (default 1):
    P(0..0 | a..a) > 0
    P(0..0 | b_k a_rest) = 0           for every party k
    P(1_k' 1_k 0_rest | b_k' b_k a_rest) = 0   for every k != k'
A distribution satisfying the zero conditions with positive success
probability cannot be reproduced by any bilocal non-signaling model.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (DegenerateSettings, NonUniqueSolution, NumericalFailure,
                     VanishingSuccess)
from .measure import JointDistribution, MeasurementSettings, born_distribution
from .qstate import DensityMatrix, PureState, _frozen


@dataclass(frozen=True)
class HardyReport:
    """Outcome of evaluating the test conditions on one distribution."""

    pivot: int
    p_success: float
    zero_residuals: tuple[float, ...]
    passed: bool


@dataclass(frozen=True, eq=False)
class HardySubspace:
    """Span of the 2n product vectors defined by the measurement rays, together
    with the unique direction phi orthogonal to the 2n-1 constraint vectors."""

    settings: MeasurementSettings
    basis: np.ndarray
    phi: PureState


def _mask(n: int, k: int) -> int:
    return 1 << (n - k)


def hardy_conditions(d: JointDistribution, pivot: int = 1, eps_zero: float = 1e-9,
                     delta_pos: float = 1e-6, standard: bool = False) -> HardyReport:
    """Evaluate the test conditions on a joint distribution.

    With standard=True the n-1 pairwise conditions are replaced by the single
    all-ones condition P(1..1|b..b) = 0, the form that GHZ states can pass.
    """
    n = d.n
    if not 1 <= pivot <= n:
        raise ValueError(f"pivot must be in 1..{n}, got {pivot}")
    p_success = float(d.p[0, 0])
    residuals = [abs(float(d.p[_mask(n, k), 0])) for k in range(1, n + 1)]
    if standard:
        ones = 2 ** n - 1
        residuals.append(abs(float(d.p[ones, ones])))
    else:
        for k in range(1, n + 1):
            if k == pivot:
                continue
            idx = _mask(n, pivot) | _mask(n, k)
            residuals.append(abs(float(d.p[idx, idx])))
    passed = p_success > delta_pos and max(residuals) < eps_zero
    return HardyReport(pivot, p_success, tuple(residuals), passed)


def inequality1(d: JointDistribution, pivot: int = 1) -> float:
    """Pivot-form Bell functional; nonpositive on every bilocal NS model."""
    n = d.n
    value = float(d.p[0, 0])
    for k in range(1, n + 1):
        value -= float(d.p[_mask(n, k), 0])
    for k in range(1, n + 1):
        if k == pivot:
            continue
        idx = _mask(n, pivot) | _mask(n, k)
        value -= float(d.p[idx, idx])
    return value


def inequality2(d: JointDistribution) -> float:
    """Symmetrized Bell functional averaging the pairwise terms over every
    ordered pivot pair; also nonpositive on every bilocal NS model."""
    n = d.n
    value = float(d.p[0, 0])
    for k in range(1, n + 1):
        value -= float(d.p[_mask(n, k), 0])
    pair_sum = 0.0
    for kp in range(1, n + 1):
        for k in range(1, n + 1):
            if k == kp:
                continue
            idx = _mask(n, kp) | _mask(n, k)
            pair_sum += float(d.p[idx, idx])
    return value - pair_sum / (n - 1)


def _product_column(kets) -> np.ndarray:
    out = kets[0]
    for k in kets[1:]:
        out = np.kron(out, k)
    return out


def _basis_columns(settings: MeasurementSettings) -> np.ndarray:
    """The 2n normalized product vectors: a_I, then b_k a_rest for each k,
    then (b_1 b_k)-complement pairs a_rest for k = 2..n."""
    n = settings.n
    a = [settings.pairs[k][0].ket() for k in range(n)]
    b = [settings.pairs[k][1].ket() for k in range(n)]
    bbar = [settings.pairs[k][1].orthogonal().ket() for k in range(n)]
    cols = [_product_column(a)]
    for k in range(n):
        kets = list(a)
        kets[k] = b[k]
        cols.append(_product_column(kets))
    for k in range(1, n):
        kets = list(a)
        kets[0] = bbar[0]
        kets[k] = bbar[k]
        cols.append(_product_column(kets))
    return np.column_stack(cols)


def construct_hardy_state(settings: MeasurementSettings) -> HardySubspace:
    """Find the unique state in the settings' subspace that satisfies all
    zero conditions with pivot 1 and keeps the success probability nonzero."""
    basis = _basis_columns(settings)
    sv = np.linalg.svd(basis, compute_uv=False)
    if sv[-1] <= 1e-10:
        raise DegenerateSettings(
            f"product vectors nearly dependent (smallest singular value {sv[-1]:.3e})")
    constraints = basis[:, 1:]
    overlap = constraints.conj().T @ basis
    _, s, vh = np.linalg.svd(overlap)
    if (s < 1e-10).any():
        raise NonUniqueSolution(
            "constraint overlap matrix is rank deficient; orthogonal direction not unique")
    z = vh[-1].conj()
    phi = PureState(settings.n, basis @ z)
    if abs(np.vdot(basis[:, 0], phi.amplitudes)) <= 1e-10:
        raise VanishingSuccess("constructed state is orthogonal to the success vector")
    report = hardy_conditions(born_distribution(phi, settings), pivot=1,
                              eps_zero=1e-9, delta_pos=0.0)
    if not report.passed:
        raise NumericalFailure(
            f"constructed state fails its own conditions "
            f"(max residual {max(report.zero_residuals):.3e})")
    return HardySubspace(settings, _frozen(basis), phi)


def mixed_state_check(rho: DensityMatrix, sub: HardySubspace, tol: float = 1e-8) -> bool:
    """Whether the projection of rho into the settings' subspace is proportional
    to |phi><phi|, the necessary and sufficient condition for a mixed state to
    satisfy every zero condition of the test."""
    q, _ = np.linalg.qr(sub.basis)
    proj = q @ q.conj().T
    inside = proj @ rho.entries @ proj
    w, v = np.linalg.eigh(inside)
    if w[-1] <= tol:
        return True
    if w[-2] > tol:
        return False
    return abs(np.vdot(sub.phi.amplitudes, v[:, -1])) ** 2 >= 1.0 - tol
