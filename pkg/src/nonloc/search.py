"""Derivative-free search for measurement settings passing the test on an
arbitrary pure state, and batch experiments over Haar-random states.

The search parameterizes each party's two rays by Bloch angles and minimizes
a penalty objective (zero-condition weight minus mu times the success
probability) by Nelder-Mead from random starts.  A candidate basin is then
polished on the residual alone, with the b rays eliminated in closed form:
for fixed a rays the k-th zero condition of the first group determines b_k
uniquely as the ray orthogonal to the partial overlap of the state with the
other parties' a rays, which drops those conditions to exactly zero and
leaves only the n-1 pairwise conditions to drive down.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import minimize

from .hardy import hardy_conditions
from .measure import MeasurementSettings, Ray, born_distribution
from .polytope import bilocal_ns_vertices, lp_membership
from .qstate import PureState, genuine_entanglement_check, haar_random_pure


@dataclass(frozen=True)
class SearchConfig:
    """Knobs of the multistart search; defaults are sized for n = 3 and 4."""

    multistarts: int = 32
    max_iters: int = 2000
    mu: float = 0.1
    eps_zero: float = 1e-10
    delta_pos: float = 1e-4
    seed: int = 0


@dataclass(frozen=True)
class NoSettingsFound:
    """Negative search outcome; best_residual is the smallest zero-condition
    weight seen across all starts, best_success the success probability there."""

    best_residual: float
    best_success: float


@dataclass(frozen=True)
class ExperimentRecord:
    index: int
    sub_seed: int
    passed: bool
    p_success: float
    max_residual: float
    iterations: int
    lp_checked: bool
    lp_infeasible: bool


@dataclass(frozen=True, eq=False)
class ExperimentSummary:
    n: int
    count: int
    seed: int
    passed: int
    failed: int
    records: tuple[ExperimentRecord, ...]


def _ray_from_angles(t: float, phi: float) -> np.ndarray:
    return np.array([math.cos(t / 2), math.sin(t / 2) * np.exp(1j * phi)])


def _orth(v: np.ndarray) -> np.ndarray:
    return np.array([-np.conj(v[1]), np.conj(v[0])])


def _overlap(psi_t: np.ndarray, kets) -> complex:
    """<k_1 ... k_n | psi> via one tensor contraction."""
    t = psi_t
    for k in kets:
        t = np.tensordot(k.conj(), t, axes=(0, 0))
    return complex(t)


def _constraint_overlaps(psi_t: np.ndarray, a, b):
    """Overlaps of the state with a_I and the 2n-1 constraint vectors."""
    n = len(a)
    out = [_overlap(psi_t, a)]
    for k in range(n):
        kets = list(a)
        kets[k] = b[k]
        out.append(_overlap(psi_t, kets))
    for k in range(1, n):
        kets = list(a)
        kets[0] = _orth(b[0])
        kets[k] = _orth(b[k])
        out.append(_overlap(psi_t, kets))
    return np.array(out)


def _angles_to_rays(params: np.ndarray, n: int):
    a = [_ray_from_angles(params[4 * k], params[4 * k + 1]) for k in range(n)]
    b = [_ray_from_angles(params[4 * k + 2], params[4 * k + 3]) for k in range(n)]
    return a, b


def _eliminate_b(psi_t: np.ndarray, a):
    """Partial overlaps u_k = <a_(not k)|psi>; b_k orthogonal to u_k kills the
    k-th zero condition exactly.  Returns None when some u_k degenerates."""
    n = len(a)
    us = []
    for k in range(n):
        t = psi_t
        ax = 0
        for j in range(n):
            if j == k:
                ax = 1
                continue
            t = np.tensordot(a[j].conj(), t, axes=(0, ax))
        norm = np.linalg.norm(t)
        if norm < 1e-150:
            return None
        us.append(t / norm)
    return us


def _pair_residuals(psi_t: np.ndarray, a, us) -> np.ndarray:
    """The n-1 pairwise zero-condition amplitudes, with b-bar_k = u_k."""
    n = len(a)
    vals = []
    for k in range(1, n):
        kets = list(a)
        kets[0] = us[0]
        kets[k] = us[k]
        vals.append(_overlap(psi_t, kets))
    return np.array(vals)


def find_settings(psi: PureState, cfg: SearchConfig):
    """Search for settings passing the test with pivot 1 on a pure state.

    Returns MeasurementSettings on success (re-verified through the full Born
    table), otherwise a NoSettingsFound record.  An optional stats dict
    collects the number of starts and function evaluations used.
    """
    return _find_settings(psi, cfg, None)


def _find_settings(psi: PureState, cfg: SearchConfig, stats: dict | None):
    n = psi.n
    psi_t = psi.tensor()
    rng = np.random.default_rng(cfg.seed)
    fevals = 0

    def penalty(params: np.ndarray) -> float:
        nonlocal fevals
        fevals += 1
        a, b = _angles_to_rays(params, n)
        ov = _constraint_overlaps(psi_t, a, b)
        return float((np.abs(ov[1:]) ** 2).sum() - cfg.mu * abs(ov[0]) ** 2)

    def pair_objective(a_params: np.ndarray) -> float:
        nonlocal fevals
        fevals += 1
        a = [_ray_from_angles(a_params[2 * k], a_params[2 * k + 1]) for k in range(n)]
        us = _eliminate_b(psi_t, a)
        if us is None:
            return np.inf
        return float((np.abs(_pair_residuals(psi_t, a, us)) ** 2).sum())

    best_residual = np.inf
    best_success = 0.0
    for start in range(cfg.multistarts):
        x0 = np.empty(4 * n)
        x0[0::2] = rng.uniform(0.0, math.pi, 2 * n)
        x0[1::2] = rng.uniform(0.0, 2 * math.pi, 2 * n)
        stage1 = minimize(penalty, x0, method="Nelder-Mead",
                          options={"maxiter": cfg.max_iters, "xatol": 1e-7,
                                   "fatol": 1e-12, "adaptive": True})
        a_params = np.concatenate([stage1.x[4 * k:4 * k + 2] for k in range(n)])
        value = pair_objective(a_params)
        for _ in range(3):
            if value < 0.01 * cfg.eps_zero:
                break
            polish = minimize(pair_objective, a_params, method="Nelder-Mead",
                              options={"maxiter": cfg.max_iters, "xatol": 1e-10,
                                       "fatol": 1e-16, "adaptive": True})
            if polish.fun >= value:
                break
            a_params, value = polish.x, polish.fun

        a = [_ray_from_angles(a_params[2 * k], a_params[2 * k + 1]) for k in range(n)]
        us = _eliminate_b(psi_t, a)
        if us is None:
            continue
        b = [_orth(u) for u in us]
        ov = _constraint_overlaps(psi_t, a, b)
        residual = float((np.abs(ov[1:]) ** 2).sum())
        success = abs(ov[0]) ** 2
        if residual < best_residual:
            best_residual, best_success = residual, success
        if residual < cfg.eps_zero and success > cfg.delta_pos:
            settings = MeasurementSettings(
                n, tuple((Ray(*ak), Ray(*bk)) for ak, bk in zip(a, b)))
            report = hardy_conditions(born_distribution(psi, settings), pivot=1,
                                      eps_zero=cfg.eps_zero, delta_pos=cfg.delta_pos)
            if report.passed:
                if stats is not None:
                    stats["starts"] = start + 1
                    stats["fevals"] = fevals
                return settings
    if stats is not None:
        stats["starts"] = cfg.multistarts
        stats["fevals"] = fevals
    return NoSettingsFound(best_residual, float(best_success))


def _sub_seed(*entropy: int) -> int:
    return int(np.random.SeedSequence(entropy).generate_state(1, np.uint64)[0])


def _run_state(args) -> ExperimentRecord:
    n, seed, index, cfg, lp_check = args
    attempt = 0
    while True:
        state_seed = _sub_seed(seed, index, attempt)
        psi = haar_random_pure(n, state_seed)
        if genuine_entanglement_check(psi, 1e-4):
            break
        attempt += 1
    stats: dict = {}
    result = _find_settings(psi, replace(cfg, seed=_sub_seed(seed, index, 1 << 20)),
                            stats)
    if isinstance(result, NoSettingsFound):
        return ExperimentRecord(index, state_seed, False, result.best_success,
                                result.best_residual, stats.get("fevals", 0),
                                False, False)
    d = born_distribution(psi, result)
    report = hardy_conditions(d, pivot=1, eps_zero=cfg.eps_zero,
                              delta_pos=cfg.delta_pos)
    lp_infeasible = False
    if lp_check:
        lp_infeasible = not lp_membership(d, bilocal_ns_vertices()).feasible
    return ExperimentRecord(index, state_seed, report.passed, report.p_success,
                            max(report.zero_residuals), stats.get("fevals", 0),
                            lp_check, lp_infeasible)


def random_experiment(n: int, count: int, seed: int, cfg: SearchConfig,
                      lp_subsample: int = 0, jobs: int = 1) -> ExperimentSummary:
    """Run the search on `count` Haar-random genuinely entangled states.

    Each state draws its own RNG stream from (seed, index), so summaries are
    reproducible and independent of `jobs`.  For n = 3 the first
    `lp_subsample` states are additionally cross-checked by the bilocal LP.
    """
    if n not in (3, 4):
        raise ValueError("experiment supports n = 3 or 4")
    if count < 1:
        raise ValueError("count must be at least 1")
    tasks = [(n, seed, i, cfg, n == 3 and i < lp_subsample) for i in range(count)]
    if jobs > 1:
        import concurrent.futures
        with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
            records = sorted(pool.map(_run_state, tasks, chunksize=4),
                             key=lambda r: r.index)
    else:
        records = [_run_state(t) for t in tasks]
    passed = sum(1 for r in records if r.passed)
    return ExperimentSummary(n, count, seed, passed, count - passed, tuple(records))
