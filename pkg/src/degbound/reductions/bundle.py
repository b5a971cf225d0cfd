"""Reduction bundles: generated instance, parameters, structural witness and forward certificate builder."""

from __future__ import annotations

import json
from collections.abc import Callable
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from ..decomp import (
    EliminationForest,
    TreeDecomposition,
    emit_forest,
    emit_td,
    forest_to_decomposition,
    parse_forest,
    parse_td,
    validate,
    validate_forest,
)
from ..graph import Coloring, Graph, emit_gr, parse_gr, verify_coloring, verify_deletion_set

Witness = TreeDecomposition | EliminationForest
Certificate = list[int] | Coloring


@dataclass
class ReductionBundle:
    """A generated instance together with everything needed to check it.

    `params` holds `problem` ("bdvd" or "dc"), `delta`, and `k` (bdvd) or `chi` (dc).
    `witness_bound` is the width (path/tree decomposition) or depth (forest) the
    witness must respect. `labels[v]` names vertex v by its role in the construction.
    """

    construction: str
    graph: Graph
    params: dict[str, int | str]
    witness: Witness
    witness_bound: int
    forward_builder: Callable[[Any], Certificate]
    labels: list[object] = field(default_factory=list)
    meta: dict[str, Any] = field(default_factory=dict)

    @property
    def problem(self) -> str:
        return str(self.params["problem"])

    @property
    def delta(self) -> int:
        return int(self.params["delta"])

    def witness_measure(self) -> int | list[str]:
        """Width or depth of the witness if it validates, else the violations."""
        if isinstance(self.witness, EliminationForest):
            return validate_forest(self.witness, self.graph)
        return validate(self.witness, self.graph)

    def witness_problems(self) -> list[str]:
        res = self.witness_measure()
        if isinstance(res, list):
            return res
        if res > self.witness_bound:
            return [f"witness measure {res} exceeds bound {self.witness_bound}"]
        return []

    def decomposition(self) -> TreeDecomposition:
        """The witness as a tree decomposition (forests become root-path bags)."""
        if isinstance(self.witness, EliminationForest):
            return forest_to_decomposition(self.witness, self.graph)
        return self.witness

    def certificate_ok(self, cert: Certificate) -> bool:
        return certificate_ok(self.graph, self.params, cert)


def certificate_ok(g: Graph, params: dict[str, int | str], cert: Certificate) -> bool:
    """Deletion sets must respect the budget k; colorings must use at most chi colors."""
    delta = int(params["delta"])
    if params["problem"] == "bdvd":
        s = list(cert)  # type: ignore[arg-type]
        return len(set(s)) <= int(params["k"]) and verify_deletion_set(g, delta, s)
    if not isinstance(cert, dict):
        return False
    return verify_coloring(g, delta, cert, int(params["chi"]))


def _label_text(label: object) -> str:
    return repr(label)


def write_bundle(
    bundle: ReductionBundle,
    out_dir: str | Path,
    certificate: Certificate | None = None,
    source: str | None = None,
    seed: int | None = None,
) -> Path:
    """Serialize to a directory after re-validating the witness."""
    problems = bundle.witness_problems()
    if problems:
        raise ValueError("witness rejected: " + "; ".join(problems[:5]))
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "instance.gr").write_text(emit_gr(bundle.graph))
    params = dict(bundle.params)
    params["witness_bound"] = bundle.witness_bound
    if isinstance(bundle.witness, EliminationForest):
        params["witness_kind"] = "forest"
        (out / "witness.forest").write_text(emit_forest(bundle.witness))
    else:
        params["witness_kind"] = "td"
        (out / "witness.td").write_text(emit_td(bundle.witness, bundle.graph.n))
    (out / "params.json").write_text(json.dumps(params, indent=2, sort_keys=True) + "\n")
    provenance = {
        "construction": bundle.construction,
        "source": source,
        "seed": seed,
        "meta": bundle.meta,
        "labels": {str(v): _label_text(lab) for v, lab in enumerate(bundle.labels) if v},
    }
    (out / "provenance.json").write_text(json.dumps(provenance, indent=1, sort_keys=True, default=str) + "\n")
    if certificate is not None:
        (out / "certificate.json").write_text(json.dumps(certificate_to_json(certificate), sort_keys=True) + "\n")
    return out


def certificate_to_json(cert: Certificate) -> dict[str, Any]:
    if isinstance(cert, dict):
        return {"coloring": {str(v): c for v, c in sorted(cert.items())}}
    return {"deletion_set": sorted(cert)}


def certificate_from_json(data: dict[str, Any]) -> Certificate:
    if "coloring" in data:
        return {int(v): int(c) for v, c in data["coloring"].items()}
    if "deletion_set" in data:
        return [int(v) for v in data["deletion_set"]]
    raise ValueError("certificate needs a 'coloring' or 'deletion_set' field")


@dataclass
class LoadedBundle:
    graph: Graph
    params: dict[str, Any]
    witness: Witness
    provenance: dict[str, Any]
    certificate: Certificate | None


def read_bundle(path: str | Path) -> LoadedBundle:
    d = Path(path)
    graph = parse_gr((d / "instance.gr").read_text())
    params = json.loads((d / "params.json").read_text())
    witness: Witness
    if (d / "witness.forest").exists():
        witness = parse_forest((d / "witness.forest").read_text())
    else:
        witness, _ = parse_td((d / "witness.td").read_text())
    prov_path = d / "provenance.json"
    provenance = json.loads(prov_path.read_text()) if prov_path.exists() else {}
    cert_path = d / "certificate.json"
    cert = certificate_from_json(json.loads(cert_path.read_text())) if cert_path.exists() else None
    return LoadedBundle(graph, params, witness, provenance, cert)


def verify_bundle(path: str | Path) -> list[str]:
    """Re-check a bundle directory: witness validity and bound, plus the certificate if present."""
    b = read_bundle(path)
    problems: list[str] = []
    if isinstance(b.witness, EliminationForest):
        res = validate_forest(b.witness, b.graph)
    else:
        res = validate(b.witness, b.graph)
    if isinstance(res, list):
        problems.extend(res)
    elif "witness_bound" in b.params and res > int(b.params["witness_bound"]):
        problems.append(f"witness measure {res} exceeds bound {b.params['witness_bound']}")
    if b.certificate is not None and not certificate_ok(b.graph, b.params, b.certificate):
        problems.append("certificate fails the instance check")
    return problems
