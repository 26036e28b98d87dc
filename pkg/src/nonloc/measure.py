"""Two-setting projective qubit measurements and Born-rule joint distributions.

A setting index s and an outcome index r both pack one bit per party, party 1
in the most significant position.  Setting bit 0 selects the a measurement,
bit 1 the b measurement; outcome bit 0 is the projector onto the setting's
ray, outcome bit 1 the projector onto its orthogonal complement.
"""

from __future__ import annotations

import itertools
import string
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, SignalingDistribution
from .qstate import DensityMatrix, PureState, _check_n, _frozen


@dataclass(frozen=True)
class Ray:
    """A single-qubit ray c0|0> + c1|1>, kept unnormalized until used."""

    c0: complex
    c1: complex

    def __post_init__(self):
        object.__setattr__(self, "c0", complex(self.c0))
        object.__setattr__(self, "c1", complex(self.c1))
        if abs(self.c0) ** 2 + abs(self.c1) ** 2 < 1e-24:
            raise ValueError("ray has numerically zero norm")

    @classmethod
    def from_param(cls, x: complex) -> "Ray":
        """|0> + x^* |1>; the point at infinity is Ray(0, 1)."""
        return cls(1.0, np.conj(x))

    def ket(self) -> np.ndarray:
        v = np.array([self.c0, self.c1])
        return v / np.linalg.norm(v)

    def orthogonal(self) -> "Ray":
        return Ray(-np.conj(self.c1), np.conj(self.c0))


@dataclass(frozen=True, eq=False)
class MeasurementSettings:
    """Per-party pairs (a_k, b_k) of measurement rays for n parties."""

    n: int
    pairs: tuple[tuple[Ray, Ray], ...]

    def __post_init__(self):
        _check_n(self.n)
        if len(self.pairs) != self.n:
            raise ValueError(f"expected {self.n} ray pairs, got {len(self.pairs)}")
        object.__setattr__(self, "pairs", tuple((a, b) for a, b in self.pairs))

    @classmethod
    def from_shared_params(cls, n: int, x1: complex, y1: complex,
                           x: complex, y: complex) -> "MeasurementSettings":
        """Party 1 gets (x1, y1), every other party the common (x, y)."""
        first = (Ray.from_param(x1), Ray.from_param(y1))
        rest = (Ray.from_param(x), Ray.from_param(y))
        return cls(n, (first,) + (rest,) * (n - 1))

    @classmethod
    def identical(cls, n: int, a: Ray, b: Ray) -> "MeasurementSettings":
        return cls(n, ((a, b),) * n)

    def outcome_kets(self, k: int, setting_bit: int) -> tuple[np.ndarray, np.ndarray]:
        """Normalized projector rays for party k (1-based) under one setting."""
        ray = self.pairs[k - 1][setting_bit]
        return ray.ket(), ray.orthogonal().ket()

    def transformed(self, u: np.ndarray) -> "MeasurementSettings":
        """Apply the same single-qubit matrix to every ray."""
        pairs = tuple(
            (Ray(*(u @ np.array([a.c0, a.c1]))), Ray(*(u @ np.array([b.c0, b.c1]))))
            for a, b in self.pairs)
        return MeasurementSettings(self.n, pairs)


@dataclass(frozen=True, eq=False)
class JointDistribution:
    """Table p[s][r] of outcome probabilities for every setting combination.

    Entries are stored raw; tiny negative floating noise (>= -1e-12) is
    tolerated here and clamped only when a table is written out.
    """

    n: int
    p: np.ndarray

    def __post_init__(self):
        _check_n(self.n)
        dim = 2 ** self.n
        p = np.asarray(self.p, dtype=float)
        if p.shape != (dim, dim):
            raise ValueError(f"expected shape {(dim, dim)}, got {p.shape}")
        if p.min() < -1e-12:
            raise ValueError(f"negative probability {p.min():.3e}")
        rows = p.sum(axis=1)
        if np.abs(rows - 1.0).max() > 1e-10:
            raise ValueError("a setting row does not sum to 1")
        object.__setattr__(self, "p", _frozen(p))


def _setting_bit(s: int, n: int, k: int) -> int:
    return (s >> (n - k)) & 1


def _einsum_spec(n: int) -> str:
    lower = string.ascii_lowercase[:n]
    upper = string.ascii_uppercase[:n]
    ops = ",".join(f"{u}{l}" for u, l in zip(upper, lower))
    return f"{ops},{lower}->{upper}"


def born_distribution(state, settings: MeasurementSettings) -> JointDistribution:
    """Joint distribution of all 2^n setting choices on a pure or mixed state."""
    n = settings.n
    if state.n != n:
        raise DimensionMismatch(f"state has {state.n} parties, settings {n}")
    bras = [[np.stack([k0.conj(), k1.conj()])
             for k0, k1 in (settings.outcome_kets(k, sb) for sb in (0, 1))]
            for k in range(1, n + 1)]
    dim = 2 ** n
    p = np.empty((dim, dim))
    if isinstance(state, PureState):
        spec = _einsum_spec(n)
        t = state.tensor()
        for s in range(dim):
            mats = [bras[k][_setting_bit(s, n, k + 1)] for k in range(n)]
            amps = np.einsum(spec, *mats, t)
            p[s] = np.abs(amps.reshape(-1)) ** 2
    elif isinstance(state, DensityMatrix):
        for s in range(dim):
            w = bras[0][_setting_bit(s, n, 1)]
            for k in range(1, n):
                w = np.kron(w, bras[k][_setting_bit(s, n, k + 1)])
            p[s] = np.einsum("ij,jk,ik->i", w, state.entries, w.conj()).real
    else:
        raise TypeError(f"unsupported state type {type(state).__name__}")
    return JointDistribution(n, p)


def ns_residual(d: JointDistribution) -> float:
    """Largest signaling violation: how much any party's setting choice moves
    the marginal seen by the others."""
    n = d.n
    t = d.p.reshape((2,) * (2 * n))
    worst = 0.0
    for k in range(n):
        marg = t.sum(axis=n + k)
        worst = max(worst, float(np.abs(np.diff(marg, axis=k)).max()))
    return worst


def marginal(d: JointDistribution, subset, settings_bits, outcome_bits,
             tol: float = 1e-8) -> float:
    """Marginal probability of outcomes on a subset, given that subset's settings.

    Computed in every setting context of the complement; the contexts must
    agree within tol (otherwise the table signals) and their mean is returned.
    """
    n = d.n
    subset = tuple(subset)
    if any(not 1 <= k <= n for k in subset) or len(set(subset)) != len(subset):
        raise ValueError(f"bad subset {subset} for {n} parties")
    if len(settings_bits) != len(subset) or len(outcome_bits) != len(subset):
        raise ValueError("settings/outcome bit counts must match the subset")
    others = [k for k in range(1, n + 1) if k not in subset]
    t = d.p.reshape((2,) * (2 * n))
    values = []
    for ctx in itertools.product((0, 1), repeat=len(others)):
        index: list = [slice(None)] * (2 * n)
        for k, sb, rb in zip(subset, settings_bits, outcome_bits):
            index[k - 1] = sb
            index[n + k - 1] = rb
        for k, sb in zip(others, ctx):
            index[k - 1] = sb
        values.append(float(t[tuple(index)].sum()))
    spread = max(values) - min(values)
    if spread > tol:
        raise SignalingDistribution(
            f"marginal varies by {spread:.3e} across complement settings")
    return float(np.mean(values))
