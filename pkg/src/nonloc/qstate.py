"""n-qubit pure and mixed states, the symmetric (Dicke) parameterization,
and entanglement structure across bipartitions.

Bit convention used by every module in this package: party 1 is the most
significant bit of a basis index, so index(r_1..r_n) = sum_k r_k 2^(n-k).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .errors import OptimizerDidNotConverge

MAX_PARTIES = 8


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


def _check_n(n: int) -> None:
    if not 2 <= n <= MAX_PARTIES:
        raise ValueError(f"party count must be between 2 and {MAX_PARTIES}, got {n}")


@dataclass(frozen=True, eq=False)
class PureState:
    """Dense amplitude table of an n-qubit pure state, normalized on construction."""

    n: int
    amplitudes: np.ndarray

    def __post_init__(self):
        _check_n(self.n)
        amp = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amp.size != 2 ** self.n:
            raise ValueError(f"expected {2 ** self.n} amplitudes, got {amp.size}")
        norm = np.linalg.norm(amp)
        if norm < 1e-12:
            raise ValueError("state vector is numerically zero")
        object.__setattr__(self, "amplitudes", _frozen(amp / norm))

    def tensor(self) -> np.ndarray:
        """Amplitudes reshaped to one axis per party, party 1 first."""
        return self.amplitudes.reshape((2,) * self.n)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """n-qubit density operator as a dense 2^n x 2^n matrix."""

    n: int
    entries: np.ndarray

    def __post_init__(self):
        _check_n(self.n)
        dim = 2 ** self.n
        rho = np.asarray(self.entries, dtype=complex)
        if rho.shape != (dim, dim):
            raise ValueError(f"expected shape {(dim, dim)}, got {rho.shape}")
        if np.abs(rho - rho.conj().T).max() > 1e-12:
            raise ValueError("density matrix is not Hermitian")
        if abs(np.trace(rho).real - 1.0) > 1e-12 or abs(np.trace(rho).imag) > 1e-12:
            raise ValueError("density matrix trace is not 1")
        if np.linalg.eigvalsh(rho).min() < -1e-10:
            raise ValueError("density matrix has a negative eigenvalue")
        object.__setattr__(self, "entries", _frozen(rho))

    @classmethod
    def from_pure(cls, psi: PureState) -> "DensityMatrix":
        v = psi.amplitudes
        return cls(psi.n, np.outer(v, v.conj()))


@dataclass(frozen=True, eq=False)
class SymmetricState:
    """Permutation-symmetric n-qubit state given by its n+1 Dicke coefficients.

    h[k] is the common amplitude of every basis state with exactly k ones,
    so the normalization is sum_k C(n,k) |h_k|^2 = 1 (enforced here).
    """

    n: int
    h: np.ndarray

    def __post_init__(self):
        _check_n(self.n)
        h = np.asarray(self.h, dtype=complex).reshape(-1)
        if h.size != self.n + 1:
            raise ValueError(f"expected {self.n + 1} Dicke coefficients, got {h.size}")
        weights = np.array([math.comb(self.n, k) for k in range(self.n + 1)])
        norm = math.sqrt(float(weights @ (np.abs(h) ** 2)))
        if norm < 1e-12:
            raise ValueError("symmetric state vector is numerically zero")
        object.__setattr__(self, "h", _frozen(h / norm))

    @classmethod
    def ghz(cls, n: int, theta: float) -> "SymmetricState":
        """cos(theta)|0..0> + sin(theta)|1..1>."""
        h = np.zeros(n + 1, dtype=complex)
        h[0] = math.cos(theta)
        h[n] = math.sin(theta)
        return cls(n, h)

    @classmethod
    def w(cls, n: int) -> "SymmetricState":
        """Equal superposition of the n single-excitation basis states."""
        h = np.zeros(n + 1, dtype=complex)
        h[1] = 1.0 / math.sqrt(n)
        return cls(n, h)


@dataclass(frozen=True)
class Bipartition:
    """One unordered cut of parties {1..n}, stored by its canonical side.

    The canonical side is the smaller one; at equal sizes the side whose
    sorted tuple is lexicographically smaller (it contains party 1).
    """

    alpha: tuple[int, ...]
    n: int

    def __post_init__(self):
        _check_n(self.n)
        side = tuple(sorted(set(self.alpha)))
        if not side or len(side) >= self.n:
            raise ValueError("bipartition side must be a proper nonempty subset")
        if side[0] < 1 or side[-1] > self.n:
            raise ValueError(f"party labels must lie in 1..{self.n}")
        other = tuple(p for p in range(1, self.n + 1) if p not in side)
        if len(other) < len(side) or (len(other) == len(side) and other < side):
            side = other
        object.__setattr__(self, "alpha", side)

    def complement(self) -> tuple[int, ...]:
        return tuple(p for p in range(1, self.n + 1) if p not in self.alpha)

    @classmethod
    def all(cls, n: int) -> tuple["Bipartition", ...]:
        """Every unordered bipartition of n parties (2^(n-1) - 1 of them)."""
        seen: dict[tuple[int, ...], Bipartition] = {}
        for mask in range(1, 2 ** n - 1):
            parties = tuple(k for k in range(1, n + 1) if mask & (1 << (n - k)))
            cut = cls(parties, n)
            seen.setdefault(cut.alpha, cut)
        return tuple(seen.values())


def dicke_expand(s: SymmetricState) -> PureState:
    """Full 2^n amplitude table of a symmetric state."""
    amps = np.array([s.h[b.bit_count()] for b in range(2 ** s.n)], dtype=complex)
    return PureState(s.n, amps)


def _sym_overlap(h: np.ndarray, n: int, c, sig):
    """<beta^n|psi> for beta = (cos(t/2), e^{i phi} sin(t/2)); c, sig may be arrays.

    c = cos(t/2) and sig = e^{-i phi} sin(t/2) are the conjugated components.
    """
    out = 0.0
    for k in range(n + 1):
        out = out + h[k] * math.comb(n, k) * c ** (n - k) * sig ** k
    return out


def _partial_overlap(h: np.ndarray, n: int, beta: np.ndarray) -> np.ndarray:
    """Single-qubit vector t with t_j = <beta^(n-1) e_j|psi>."""
    cb0, cb1 = np.conj(beta)
    t0 = sum(h[k] * math.comb(n - 1, k) * cb0 ** (n - 1 - k) * cb1 ** k for k in range(n))
    t1 = sum(h[k + 1] * math.comb(n - 1, k) * cb0 ** (n - 1 - k) * cb1 ** k for k in range(n))
    return np.array([t0, t1])


def _stationarity_residual(h: np.ndarray, n: int, beta: np.ndarray) -> float:
    orth = np.array([-np.conj(beta[1]), np.conj(beta[0])])
    return abs(np.vdot(orth, _partial_overlap(h, n, beta)))


def _power_polish(h: np.ndarray, n: int, beta: np.ndarray, iters: int = 500):
    """Refine a candidate closest product qubit by the symmetric power iteration."""
    best = beta
    best_res = _stationarity_residual(h, n, beta)
    for _ in range(iters):
        t = _partial_overlap(h, n, beta)
        norm = np.linalg.norm(t)
        if norm < 1e-300:
            break
        beta = t / norm
        res = _stationarity_residual(h, n, beta)
        if res < best_res:
            best, best_res = beta, res
        if res < 1e-14:
            break
    return best, best_res


def closest_product_state(s: SymmetricState, grid: int = 64, refine_starts: int = 5):
    """Best product approximation (beta^n) of a symmetric state.

    Returns (beta, overlap) with beta a unit single-qubit vector, phased so
    that <beta^n|psi> = overlap is real positive.  The search is a coarse
    Bloch-angle grid followed by local refinement of the leading cells and a
    power-iteration polish; only symmetric product candidates are scanned,
    which is where the optimum lies for symmetric states.
    """
    h, n = s.h, s.n
    t = np.linspace(0.0, math.pi, grid)
    phi = np.linspace(0.0, 2 * math.pi, grid, endpoint=False)
    tt, pp = np.meshgrid(t, phi, indexing="ij")
    vals = np.abs(_sym_overlap(h, n, np.cos(tt / 2), np.sin(tt / 2) * np.exp(-1j * pp)))
    # round before ranking so exact ties (balanced states) resolve to the
    # earliest grid cell instead of to float noise
    order = np.argsort(-np.round(vals, 12), axis=None, kind="stable")[:refine_starts]

    def objective(ang):
        c = math.cos(ang[0] / 2)
        sg = math.sin(ang[0] / 2) * np.exp(-1j * ang[1])
        return -abs(_sym_overlap(h, n, c, sg))

    best_beta = None
    best_val = -1.0
    best_res = np.inf
    for flat in order:
        i, j = np.unravel_index(flat, vals.shape)
        res = minimize(objective, [t[i], phi[j]], method="Nelder-Mead",
                       options={"maxiter": 400, "xatol": 1e-10, "fatol": 1e-13})
        ta, pa = res.x
        beta = np.array([math.cos(ta / 2), math.sin(ta / 2) * np.exp(1j * pa)])
        beta, stat = _power_polish(h, n, beta)
        val = abs(_sym_overlap(h, n, *np.conj(beta)))
        if val > best_val + 1e-12:
            best_beta, best_val, best_res = beta, val, stat
    if best_beta is None or best_res > 1e-8:
        raise OptimizerDidNotConverge(
            f"closest product search stalled (stationarity residual {best_res:.3e})")
    f = _sym_overlap(h, n, *np.conj(best_beta))
    best_beta = best_beta * np.exp(1j * np.angle(f) / n)
    overlap = abs(f)
    return best_beta, float(overlap)


def to_magic_basis(s: SymmetricState):
    """Rotate a symmetric state so its closest product state becomes |0..0>.

    Returns (rotated SymmetricState, single-qubit unitary u) with the rotated
    coefficients satisfying h_0 = overlap > 0 and |h_1| <= 1e-8 (stationarity).
    The same u acts on every party.
    """
    beta, _ = closest_product_state(s)
    u = np.array([[np.conj(beta[0]), np.conj(beta[1])],
                  [-beta[1], beta[0]]])
    t = dicke_expand(s).tensor()
    for axis in range(s.n):
        t = np.moveaxis(np.tensordot(u, t, axes=(1, axis)), 0, axis)
    flat = t.reshape(-1)
    h = np.empty(s.n + 1, dtype=complex)
    for k in range(s.n + 1):
        idx = [b for b in range(2 ** s.n) if b.bit_count() == k]
        h[k] = flat[idx].mean()
    if abs(h[1]) > 1e-8:
        raise OptimizerDidNotConverge(f"rotated h_1 = {abs(h[1]):.3e} exceeds 1e-8")
    return SymmetricState(s.n, h), u


def haar_random_pure(n: int, seed: int) -> PureState:
    """Haar-distributed pure state from a seeded complex Gaussian vector."""
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(2 ** n) + 1j * rng.standard_normal(2 ** n)
    return PureState(n, v)


def genuine_entanglement_check(psi: PureState, eps: float) -> bool:
    """True when the state is entangled across every bipartition.

    The criterion is that the second-largest Schmidt coefficient across each
    cut exceeds eps.
    """
    t = psi.tensor()
    for cut in Bipartition.all(psi.n):
        axes = [p - 1 for p in cut.alpha] + [p - 1 for p in cut.complement()]
        m = t.transpose(axes).reshape(2 ** len(cut.alpha), -1)
        sv = np.linalg.svd(m, compute_uv=False)
        if sv[1] <= eps:
            return False
    return True
