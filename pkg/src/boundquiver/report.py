"""JSON report documents for the command line tool.

A :class:`ReportDocument` holds only JSON-native values, so
``ReportDocument.from_json(doc.to_json()) == doc``.  Output uses sorted
keys and carries no timestamps: reruns with the same inputs and flags give
byte-identical text.  :func:`decode_analysis` rebuilds an
:class:`~boundquiver.noloop.AnalysisReport` from its encoding.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from importlib import resources
from typing import Dict, List, Optional

from .algebra import AlgebraElement, BoundQuiverAlgebra
from .hochschild import HH0Class, hh0
from .noloop import (
    AnalysisOptions,
    AnalysisReport,
    CycleCertificate,
    DimensionStatus,
    LoopCertificate,
    QuotientSummary,
    VertexReport,
)
from .quiver import Path, PathVector, Quiver

SCHEMA_VERSION = "1.0"
TOOL_NAME = "boundquiver"
TOOL_VERSION = "0.1.0"


@lru_cache(maxsize=None)
def report_schema() -> dict:
    """The published JSON schema for report documents."""
    text = resources.files("boundquiver.data").joinpath("report.schema.json").read_text()
    return json.loads(text)


@dataclass
class ReportDocument:
    command: str
    provenance: Dict
    algebra: Dict
    result: Dict
    schema_version: str = SCHEMA_VERSION
    tool: Dict = dc_field(default_factory=lambda: {"name": TOOL_NAME, "version": TOOL_VERSION})

    def to_dict(self) -> dict:
        return {"schema_version": self.schema_version, "tool": self.tool, "command": self.command,
                "provenance": self.provenance, "algebra": self.algebra, "result": self.result}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, ensure_ascii=False) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "ReportDocument":
        d = json.loads(text)
        return cls(command=d["command"], provenance=d["provenance"], algebra=d["algebra"],
                   result=d["result"], schema_version=d["schema_version"], tool=d["tool"])

    def validate(self) -> None:
        """Raise ``jsonschema.ValidationError`` when the document breaks the schema."""
        import jsonschema

        jsonschema.validate(json.loads(self.to_json()), report_schema())


# ---------------------------------------------------------------------------
# small encoders


def _terms_text(terms, rational: bool) -> str:
    if not terms:
        return "0"
    out = []
    for i, (p, c) in enumerate(terms):
        neg = rational and c < 0
        a = -c if neg else c
        body = str(p) if a == 1 else f"{a} {p}"
        if i == 0:
            out.append(("-" if neg else "") + body)
        else:
            out.append(("- " if neg else "+ ") + body)
    return " ".join(out)


def element_text(x: AlgebraElement) -> str:
    """``2/3 alpha*beta - e(1)`` style rendering; ``0`` for zero."""
    return _terms_text(x.terms(), not x.algebra.field.is_prime)


def pathvector_text(r: PathVector) -> str:
    terms = sorted(r.terms.items(), key=lambda t: (t[0].length, str(t[0])))
    return _terms_text(terms, not r.field.is_prime)


def class_json(c: HH0Class) -> dict:
    """A class in ``HH_0`` by its coordinates on the canonical complement basis."""
    H = c.space
    A = H.algebra
    return {"representative": element_text(c.representative()),
            "coordinates": [str(x) for x in c.coords],
            "basis": [str(A.basis[k]) for k in H.complement]}


def status_json(s: DimensionStatus) -> dict:
    return {"kind": s.kind, "value": s.value, "reason": s.reason, "depth": s.depth}


def status_from_json(d: dict) -> DimensionStatus:
    return DimensionStatus(d["kind"], d["value"], d["reason"], d["depth"])


def _pair(p) -> Optional[list]:
    return None if p is None else [p[0], p[1]]


def _vertex_map(A: BoundQuiverAlgebra) -> Dict[str, object]:
    return {str(v): v for v in A.vertices}


def path_from_text(q: Quiver, vmap: Dict[str, object], text: str) -> Path:
    if text.startswith("e(") and text.endswith(")"):
        return q.trivial(vmap[text[2:-1]])
    return q.path(text.split("*"))


def algebra_json(A: BoundQuiverAlgebra, name: str = "", relations: Optional[List[str]] = None) -> dict:
    q = A.quiver
    rels = relations if relations is not None else [pathvector_text(r) for r in A.relations]
    return {"name": name, "field": A.field.tag, "vertices": [str(v) for v in q.vertices],
            "arrows": [{"label": a.label, "source": str(a.source), "target": str(a.target)}
                       for a in q.arrows],
            "relations": rels, "dim": A.dim, "nilpotency_degree": A.nilpotency_degree,
            "basis": [str(p) for p in A.basis]}


# ---------------------------------------------------------------------------
# analysis reports


def vertex_json(r: VertexReport) -> dict:
    return {"vertex": str(r.vertex), "loops": list(r.loops), "ext1_self": r.ext1_self,
            "ext_self": list(r.ext_self), "pd": status_json(r.pd), "id": status_json(r.id),
            "pd_periodicity": _pair(r.pd_periodicity), "id_periodicity": _pair(r.id_periodicity),
            "local_commutative": r.local_commutative}


def loop_json(c: LoopCertificate) -> dict:
    return {"vertex": str(c.vertex), "loops": list(c.loops), "ext1_self": c.ext1_self,
            "consequence": c.consequence}


def cycle_json(A: BoundQuiverAlgebra, c: CycleCertificate) -> dict:
    order = {v: i for i, v in enumerate(A.vertices)}
    return {"cycle": str(c.cycle), "length": c.cycle.length,
            "permutations": [str(p) for p in c.permutations],
            "support": [str(v) for v in sorted(c.support, key=order.__getitem__)],
            "cyclically_free": c.cyclically_free, "cyclically_nonzero": c.cyclically_nonzero,
            "hh0_witness": c.hh0_witness, "consequence": c.consequence}


def quotient_json(s: QuotientSummary) -> dict:
    return {"vertices": [str(v) for v in s.vertices], "dim": s.dim, "hh0_dim": s.hh0_dim,
            "radical_trivial": s.radical_trivial, "radical_square_zero": s.radical_square_zero,
            "injective_dim_Se": s.injective_dim_Se, "gldim": status_json(s.gldim),
            "periodicity": {str(v): _pair(p) for v, p in s.periodicity.items()}}


def options_json(o: AnalysisOptions) -> dict:
    return {"depth": o.depth, "cycles": o.cycles, "lambda_e": [[str(v) for v in e] for e in o.lambda_e],
            "max_dim": o.max_dim, "seed": o.seed}


def analysis_json(A: BoundQuiverAlgebra, report: AnalysisReport, violations: List[str]) -> dict:
    H = hh0(A)
    return {
        "dim": report.algebra_dim,
        "nilpotency_degree": report.nilpotency_degree,
        "field": report.field,
        "hh0": {"dim": report.hh0_dim, "radical_trivial": report.radical_trivial,
                "basis": [element_text(x) for x in H.basis_representatives()]},
        "gldim": status_json(report.gldim),
        "vertices": [vertex_json(report.vertices[v]) for v in A.vertices],
        "loop_certificates": [loop_json(c) for c in report.loop_certificates],
        "cycle_certificates": [cycle_json(A, c) for c in report.cycle_certificates],
        "quotients": [quotient_json(s) for s in report.quotients],
        "extension_quiver": [{"source": str(i), "target": str(j), "multiplicity": m}
                             for i, j, m in report.extension_quiver],
        "options": options_json(report.options),
        "audit": {"passed": not violations, "violations": list(violations)},
    }


def decode_analysis(A: BoundQuiverAlgebra, d: dict) -> AnalysisReport:
    """Rebuild the report encoded by :func:`analysis_json` (vertices and paths resolved in ``A``)."""
    q = A.quiver
    vm = _vertex_map(A)
    tup = lambda p: None if p is None else tuple(p)  # noqa: E731
    vertices = {}
    for r in d["vertices"]:
        v = vm[r["vertex"]]
        vertices[v] = VertexReport(v, list(r["loops"]), r["ext1_self"], list(r["ext_self"]),
                                   status_from_json(r["pd"]), status_from_json(r["id"]),
                                   tup(r["pd_periodicity"]), tup(r["id_periodicity"]),
                                   r["local_commutative"])
    loops = [LoopCertificate(vm[c["vertex"]], list(c["loops"]), c["ext1_self"], c["consequence"])
             for c in d["loop_certificates"]]
    cycles = [CycleCertificate(path_from_text(q, vm, c["cycle"]),
                               [path_from_text(q, vm, p) for p in c["permutations"]],
                               frozenset(vm[v] for v in c["support"]), c["cyclically_free"],
                               c["cyclically_nonzero"], c["hh0_witness"])
              for c in d["cycle_certificates"]]
    quotients = [QuotientSummary([vm[v] for v in s["vertices"]], s["dim"], s["hh0_dim"],
                                 s["radical_trivial"], s["radical_square_zero"], s["injective_dim_Se"],
                                 status_from_json(s["gldim"]),
                                 {vm[v]: tuple(p) for v, p in s["periodicity"].items()})
                 for s in d["quotients"]]
    o = d["options"]
    opts = AnalysisOptions(o["depth"], o["cycles"], [[vm[v] for v in e] for e in o["lambda_e"]],
                           o["max_dim"], o["seed"])
    return AnalysisReport(
        algebra_dim=d["dim"], nilpotency_degree=d["nilpotency_degree"], field=d["field"],
        vertices=vertices, loop_certificates=loops, cycle_certificates=cycles,
        hh0_dim=d["hh0"]["dim"], radical_trivial=d["hh0"]["radical_trivial"],
        gldim=status_from_json(d["gldim"]), quotients=quotients,
        extension_quiver=[(vm[x["source"]], vm[x["target"]], x["multiplicity"])
                          for x in d["extension_quiver"]],
        options=opts)


# ---------------------------------------------------------------------------
# DOT


def _dot_id(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def dot_document(A: BoundQuiverAlgebra, ext_quiver, name: str = "") -> str:
    """The quiver and its extension quiver as two clusters of one digraph.

    Multiple arrows of the extension quiver are shrunk to one edge whose
    label is ``dim Ext^1``.
    """
    q = A.quiver
    title = name or "algebra"
    lines = [f"digraph {_dot_id(title)} {{", "  compound=true;"]
    lines.append("  subgraph cluster_quiver {")
    lines.append('    label="quiver";')
    for v in q.vertices:
        lines.append(f"    {_dot_id('q' + str(v))} [label={_dot_id(str(v))}];")
    for a in q.arrows:
        lines.append(f"    {_dot_id('q' + str(a.source))} -> {_dot_id('q' + str(a.target))}"
                     f" [label={_dot_id(a.label)}];")
    lines.append("  }")
    lines.append("  subgraph cluster_ext {")
    lines.append('    label="extension quiver";')
    for v in q.vertices:
        lines.append(f"    {_dot_id('x' + str(v))} [label={_dot_id('S' + str(v))}];")
    for i, j, m in ext_quiver:
        lines.append(f"    {_dot_id('x' + str(i))} -> {_dot_id('x' + str(j))} [label={_dot_id(str(m))}];")
    lines.append("  }")
    lines.append("}")
    return "\n".join(lines) + "\n"
