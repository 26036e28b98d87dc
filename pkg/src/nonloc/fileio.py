"""JSON and CSV readers/writers for states, settings, distributions, and
results, plus the run manifests that make every output auditable.

Complex numbers are stored as [re, im] pairs.  JSON outputs carry a
"manifest" object (command, parameters, seed, version, input digests, and a
digest of the payload itself); CSV outputs get the same manifest as a JSON
sidecar next to the file.  Nothing time-dependent is written, so a rerun with
identical inputs produces identical bytes.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
from pathlib import Path

import numpy as np

from .measure import JointDistribution, MeasurementSettings, Ray
from .polytope import LPOutcome, ModelVertexSet
from .qstate import PureState, SymmetricState
from .search import ExperimentSummary
from .symmetric import SymmetricSolution


def _pair(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def _unpair(v) -> complex:
    if not isinstance(v, (list, tuple)) or len(v) != 2:
        raise ValueError(f"expected a [re, im] pair, got {v!r}")
    return complex(float(v[0]), float(v[1]))


def _field(obj: dict, key: str):
    if not isinstance(obj, dict) or key not in obj:
        raise ValueError(f"missing field {key!r}")
    return obj[key]


def load_json(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        obj = json.load(fh)
    if not isinstance(obj, dict):
        raise ValueError("top-level JSON value must be an object")
    return obj


def load_state(path) -> PureState:
    obj = load_json(path)
    n = int(_field(obj, "n"))
    amps = [_unpair(v) for v in _field(obj, "amplitudes")]
    return PureState(n, np.array(amps))


def load_symmetric(path) -> SymmetricState:
    obj = load_json(path)
    n = int(_field(obj, "n"))
    h = [_unpair(v) for v in _field(obj, "h")]
    return SymmetricState(n, np.array(h))


def load_settings(path) -> MeasurementSettings:
    obj = load_json(path)
    n = int(_field(obj, "n"))
    pairs = []
    for party in _field(obj, "parties"):
        a = _field(party, "a")
        b = _field(party, "b")
        pairs.append((Ray(_unpair(a[0]), _unpair(a[1])),
                      Ray(_unpair(b[0]), _unpair(b[1]))))
    return MeasurementSettings(n, tuple(pairs))


def load_distribution(path) -> JointDistribution:
    obj = load_json(path)
    n = int(_field(obj, "n"))
    return JointDistribution(n, np.array(_field(obj, "p"), dtype=float))


def state_payload(psi: PureState) -> dict:
    return {"n": psi.n, "amplitudes": [_pair(z) for z in psi.amplitudes]}


def symmetric_payload(s: SymmetricState) -> dict:
    return {"n": s.n, "h": [_pair(z) for z in s.h]}


def settings_payload(m: MeasurementSettings) -> dict:
    return {"n": m.n,
            "parties": [{"a": [_pair(a.c0), _pair(a.c1)],
                         "b": [_pair(b.c0), _pair(b.c1)]}
                        for a, b in m.pairs]}


def distribution_payload(d: JointDistribution) -> dict:
    p = np.maximum(d.p, 0.0)
    return {"n": d.n, "p": [[float(v) for v in row] for row in p]}


def solution_payload(sol: SymmetricSolution) -> dict:
    return {"x": _pair(sol.x), "y1": _pair(sol.y1), "y": _pair(sol.y),
            "x1": _pair(sol.x1), "p_success": sol.p_success,
            "excluded_x": [float(t) for t in sol.excluded_x],
            "settings": settings_payload(sol.settings)}


def report_payload(report, ineq1: float, ineq2: float | None) -> dict:
    return {"pivot": report.pivot, "p_success": report.p_success,
            "zero_residuals": [float(r) for r in report.zero_residuals],
            "passed": report.passed, "ineq1": ineq1, "ineq2": ineq2}


def lp_outcome_payload(out: LPOutcome) -> dict:
    return {"feasible": out.feasible,
            "weights": None if out.weights is None
            else [float(v) for v in out.weights],
            "certificate": None if out.certificate is None
            else [[float(v) for v in row] for row in out.certificate],
            "margin": out.margin}


def vertex_set_payload(vs: ModelVertexSet) -> dict:
    return {"model": vs.model, "n": vs.n,
            "columns": [{"bipartition": None if bip is None else list(bip),
                         "p": [[float(v) for v in row] for row in col]}
                        for bip, col in zip(vs.bipartitions, vs.columns)]}


def summary_payload(s: ExperimentSummary) -> dict:
    return {"n": s.n, "count": s.count, "seed": s.seed,
            "passed": s.passed, "failed": s.failed,
            "records": [{"index": r.index, "sub_seed": r.sub_seed,
                         "passed": r.passed, "p_success": r.p_success,
                         "max_residual": r.max_residual,
                         "iterations": r.iterations,
                         "lp_checked": r.lp_checked,
                         "lp_infeasible": r.lp_infeasible}
                        for r in s.records]}


EXPERIMENT_CSV_FIELDS = ("index", "sub_seed", "passed", "p_success",
                         "max_residual", "lp_checked", "lp_infeasible")


def experiment_rows(s: ExperimentSummary) -> list[dict]:
    return [{"index": r.index, "sub_seed": r.sub_seed,
             "passed": str(r.passed).lower(),
             "p_success": f"{r.p_success:.17g}",
             "max_residual": f"{r.max_residual:.17g}",
             "lp_checked": str(r.lp_checked).lower(),
             "lp_infeasible": str(r.lp_infeasible).lower()}
            for r in s.records]


def _digest(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def _canonical(obj) -> bytes:
    return json.dumps(obj, separators=(",", ":"), sort_keys=True).encode()


def make_manifest(command: str, params: dict, seed: int | None,
                  inputs: dict | None = None) -> dict:
    from . import __version__
    manifest = {"command": command, "params": params, "seed": seed,
                "version": __version__}
    if inputs:
        manifest["inputs"] = {str(name): _digest(Path(p).read_bytes())
                              for name, p in inputs.items()}
    return manifest


def dump_json(payload: dict, manifest: dict | None = None) -> str:
    doc = dict(payload)
    if manifest is not None:
        doc["manifest"] = dict(manifest)
        doc["manifest"]["payload_sha256"] = _digest(_canonical(payload))
    return json.dumps(doc, indent=2) + "\n"


def write_json(path, payload: dict, manifest: dict | None = None) -> None:
    Path(path).write_text(dump_json(payload, manifest), encoding="utf-8")


def write_csv(path, fields, rows: list[dict],
              manifest: dict | None = None) -> None:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(fields), lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    text = buf.getvalue()
    Path(path).write_text(text, encoding="utf-8")
    if manifest is not None:
        doc = dict(manifest)
        doc["payload_sha256"] = _digest(text.encode())
        Path(str(path) + ".manifest.json").write_text(
            json.dumps(doc, indent=2) + "\n", encoding="utf-8")
