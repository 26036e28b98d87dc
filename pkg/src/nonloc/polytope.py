"""Vertex enumerations of local and bilocal non-signaling models, and LP
membership tests with verified Farkas certificates.

A model is a finite set of extreme joint distributions ("columns"); a table
belongs to the model's polytope when it is a convex combination of columns.
For n = 3 the bilocal non-signaling model glues one deterministic party to a
two-party non-signaling vertex across each of the three bipartitions.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NumericalFailure, SignalingDistribution
from .measure import JointDistribution, ns_residual
from .qstate import _frozen
from .simplex import phase1_simplex


@dataclass(frozen=True, eq=False)
class BoxVertex:
    """An extreme conditional distribution over a subset of parties."""

    scope: tuple[int, ...]
    table: np.ndarray
    kind: str


@dataclass(frozen=True, eq=False)
class ModelVertexSet:
    """All extreme columns of one model, tagged by bipartition where relevant."""

    model: str
    n: int
    columns: np.ndarray
    bipartitions: tuple[tuple[int, ...] | None, ...]


@dataclass(frozen=True, eq=False)
class LPOutcome:
    """Result of a membership LP: weights when inside, a separating functional
    (nonpositive on every column, positive on the tested table) when outside."""

    feasible: bool
    weights: np.ndarray | None
    certificate: np.ndarray | None
    margin: float


def _single_party_deterministic() -> list[np.ndarray]:
    """The four deterministic single-party boxes P(r|s), r = g(s)."""
    boxes = []
    for g0, g1 in itertools.product((0, 1), repeat=2):
        table = np.zeros((2, 2))
        table[0, g0] = 1.0
        table[1, g1] = 1.0
        boxes.append(table)
    return boxes


@functools.lru_cache(maxsize=None)
def _pair_ns_boxes() -> tuple[BoxVertex, ...]:
    """The 24 extreme non-signaling two-party boxes: 16 deterministic plus the
    8 PR-box variants P(ab|xy) = 1/2 iff a + b = xy + alpha x + beta y + gamma
    (mod 2).  Each is checked non-signaling exactly and extreme by LP."""
    boxes: list[BoxVertex] = []
    for alpha, beta, gamma, delta in itertools.product((0, 1), repeat=4):
        table = np.zeros((4, 4))
        for x, y in itertools.product((0, 1), repeat=2):
            a = (alpha * x) ^ beta
            b = (gamma * y) ^ delta
            table[2 * x + y, 2 * a + b] = 1.0
        boxes.append(BoxVertex((1, 2), _frozen(table), "deterministic"))
    for alpha, beta, gamma in itertools.product((0, 1), repeat=3):
        table = np.zeros((4, 4))
        for x, y, a, b in itertools.product((0, 1), repeat=4):
            if a ^ b == (x & y) ^ (alpha & x) ^ (beta & y) ^ gamma:
                table[2 * x + y, 2 * a + b] = 0.5
        boxes.append(BoxVertex((1, 2), _frozen(table), "pr-box-class"))
    for box in boxes:
        if ns_residual(JointDistribution(2, box.table)) != 0.0:
            raise NumericalFailure("two-party vertex is signaling")
    tables = np.stack([box.table.reshape(-1) for box in boxes])
    for i in range(len(boxes)):
        others = np.delete(tables, i, axis=0).T
        a = np.vstack([others, np.ones((1, len(boxes) - 1))])
        b = np.concatenate([tables[i], [1.0]])
        if phase1_simplex(a, b).feasible:
            raise NumericalFailure(f"two-party box {i} is not extreme")
    return tuple(boxes)


def ns_bipartite_vertices() -> tuple[BoxVertex, ...]:
    """The 24 extreme points of the two-party two-setting NS polytope."""
    return _pair_ns_boxes()


def _glue(groups) -> np.ndarray:
    """Full joint table from conditional tables on disjoint scopes covering 1..n."""
    parties = sorted(p for scope, _ in groups for p in scope)
    n = len(parties)
    full = np.ones((2 ** n, 2 ** n))
    for scope, table in groups:
        pos = [parties.index(p) for p in scope]
        m = len(scope)
        for s in range(2 ** n):
            s_sub = 0
            for j, q in enumerate(pos):
                s_sub |= ((s >> (n - 1 - q)) & 1) << (m - 1 - j)
            for r in range(2 ** n):
                r_sub = 0
                for j, q in enumerate(pos):
                    r_sub |= ((r >> (n - 1 - q)) & 1) << (m - 1 - j)
                full[s, r] *= table[s_sub, r_sub]
    return full


@functools.lru_cache(maxsize=None)
def _local_vertex_set(n: int) -> ModelVertexSet:
    singles = _single_party_deterministic()
    cols = []
    for combo in itertools.product(range(4), repeat=n):
        groups = [((k + 1,), singles[combo[k]]) for k in range(n)]
        cols.append(_glue(groups).reshape(-1))
    columns = _frozen(np.stack(cols).reshape(4 ** n, 2 ** n, 2 ** n))
    return ModelVertexSet("fully-local", n, columns, (None,) * (4 ** n))


def deterministic_local_vertices(n: int) -> ModelVertexSet:
    """All 4^n deterministic strategies of the fully local model."""
    if not 2 <= n <= 4:
        raise ValueError(f"local vertex enumeration supports 2..4 parties, got {n}")
    return _local_vertex_set(n)


@functools.lru_cache(maxsize=None)
def _bilocal_vertex_set() -> ModelVertexSet:
    singles = _single_party_deterministic()
    pair_boxes = _pair_ns_boxes()
    cols = []
    tags = []
    for lone in (1, 2, 3):
        pair = tuple(p for p in (1, 2, 3) if p != lone)
        for single in singles:
            for box in pair_boxes:
                cols.append(_glue([((lone,), single), (pair, box.table)]).reshape(-1))
                tags.append((lone,))
    columns = _frozen(np.stack(cols).reshape(len(cols), 8, 8))
    return ModelVertexSet("bilocal-ns", 3, columns, tuple(tags))


def bilocal_ns_vertices() -> ModelVertexSet:
    """All 288 columns of the three-party bilocal non-signaling model."""
    return _bilocal_vertex_set()


def lp_membership(d: JointDistribution, vs: ModelVertexSet,
                  tol: float = 1e-9) -> LPOutcome:
    """Decide membership of a table in the model polytope.

    Feasible outcomes carry weights reproducing the table to 1e-9; infeasible
    outcomes carry a certificate table rescaled to unit max entry and
    re-validated against every column.
    """
    if d.n != vs.n:
        raise DimensionMismatch(f"distribution has {d.n} parties, model {vs.n}")
    if ns_residual(d) > 1e-8:
        raise SignalingDistribution("membership tested on a signaling table")
    dim = 4 ** d.n
    struct = vs.columns.reshape(-1, dim).T
    a = np.vstack([struct, np.ones((1, struct.shape[1]))])
    b = np.concatenate([d.p.reshape(-1), [1.0]])
    res = phase1_simplex(a, b, tol=tol)
    if res.feasible:
        w = np.maximum(res.x, 0.0)
        err = np.abs(struct @ w - d.p.reshape(-1)).max()
        if err > 1e-9:
            raise NumericalFailure(f"feasible weights reproduce the table to {err:.3e} only")
        return LPOutcome(True, _frozen(w), None, 0.0)
    cert = res.y[:-1].reshape(d.p.shape) + res.y[-1] / 2 ** d.n
    scale = np.abs(cert).max()
    if scale <= 0.0:
        raise NumericalFailure("vanishing certificate from an infeasible LP")
    cert = cert / scale
    worst = float(np.einsum("csr,sr->c", vs.columns, cert).max())
    if worst > 0.0:
        # fold a constant shift through the per-setting normalization
        cert = cert - worst / 2 ** d.n
    col_vals = np.einsum("csr,sr->c", vs.columns, cert)
    margin = float((cert * d.p).sum())
    if col_vals.max() > 1e-12 or margin <= 0.0:
        raise NumericalFailure("Farkas certificate failed re-validation")
    return LPOutcome(False, None, _frozen(cert), margin)


def classify(d: JointDistribution) -> tuple[str, LPOutcome]:
    """Place a three-party table in the hierarchy: local, bilocal-but-nonlocal,
    or genuinely nonlocal.  Returns the label and the deciding LP outcome."""
    if d.n != 3:
        raise DimensionMismatch("classification is implemented for 3 parties")
    local = lp_membership(d, deterministic_local_vertices(3))
    if local.feasible:
        return "local", local
    bilocal = lp_membership(d, bilocal_ns_vertices())
    if bilocal.feasible:
        return "nonlocal-but-bilocal", bilocal
    return "genuinely-nonlocal", bilocal
