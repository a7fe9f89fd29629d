"""Command line interface: ``boundquiver <command> <algebra> [options]``.

``<algebra>`` is a description file, ``-`` for standard input, or the name
of a bundled fixture (``FX1`` to ``FX5``).  Exit status is 0 on success, 1
for usage and input errors (including parse errors) and 2 for mathematical
domain errors such as a non-admissible ideal or an unreachable horizon.

Output goes to standard output, or into the directory given by
``--output-dir`` (default: the ``BOUNDQUIVER_OUTPUT_DIR`` environment
variable) as ``<name>-<command>.<ext>``.
"""
from __future__ import annotations

import argparse
import os
import random
import sys
from pathlib import Path as FsPath
from typing import List, Optional, Sequence

from .algebra import BoundQuiverAlgebra
from .description import AlgebraDescription, parse, parse_element_text, render_terms, terms_to_vector
from .errors import BoundQuiverError, ParseError
from .fixtures import NAMES as FIXTURE_NAMES, fixture_text
from .hochschild import (
    TraceContext,
    e_trace_module,
    e_trace_projective,
    hh0,
    hs_trace,
    is_radical_trivial,
    quotient_for,
)
from .modules import LambdaMatrix, ModuleHom, left_multiplication, simple
from .noloop import AnalysisOptions, analyze, cycle_certificate, consistency_audit, enumerate_cycles
from .report import (
    ReportDocument,
    algebra_json,
    analysis_json,
    class_json,
    cycle_json,
    dot_document,
    element_text,
    loop_json,
    status_json,
)
from .resolution import find_syzygy_periodicity, simple_resolution

OUTPUT_DIR_ENV = "BOUNDQUIVER_OUTPUT_DIR"
COMMANDS = ("analyze", "hh0", "resolve", "trace", "cycles", "certify", "dot")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("algebra", help="description file, '-' for stdin, or a fixture name FX1..FX5")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized steps (default 0)")
    common.add_argument("--depth", type=int, default=None, help="resolution depth cap (default: file option or 12)")
    common.add_argument("--cap", type=int, default=None, help="admissibility length cap (default: file option or 30)")
    common.add_argument("--threads", type=int, default=1, help="worker threads for per-vertex work")
    common.add_argument("--max-dim", type=int, default=400,
                        help="give up on a resolution once a syzygy exceeds this dimension")
    common.add_argument("--json", action="store_true", help="emit the JSON report document")
    common.add_argument("--output-dir", default=os.environ.get(OUTPUT_DIR_ENV),
                        help=f"write output files here (default ${OUTPUT_DIR_ENV})")

    p = _Parser(prog="boundquiver", description="Bound quiver algebras: HH_0, traces and no-loop certificates.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    a = sub.add_parser("analyze", parents=[common], help="full analysis report")
    a.add_argument("--e", action="append", default=[], metavar="V1,V2,...",
                   help="also summarize the quotient A_e (repeatable)")
    a.add_argument("--cycles", type=int, default=None, help="maximal cycle length")
    h = sub.add_parser("hh0", parents=[common], help="HH_0 of A or of A_e")
    h.add_argument("--e", default=None, metavar="V1,V2,...")
    r = sub.add_parser("resolve", parents=[common], help="minimal resolution of a simple module")
    r.add_argument("--simple", required=True, metavar="V")
    r.add_argument("--opposite", action="store_true",
                   help="resolve over the opposite algebra (injective side)")
    t = sub.add_parser("trace", parents=[common], help="e-trace of an endomorphism")
    t.add_argument("--e", required=True, metavar="V1,V2,...")
    g = t.add_mutually_exclusive_group(required=True)
    g.add_argument("--endo", metavar="MATRIX",
                   help="matrix over A on --projective: rows split by ';', entries by ','")
    g.add_argument("--simple", metavar="V", help="identity of the simple module S_V")
    g.add_argument("--left", metavar="ELEMENT", help="left multiplication on the regular module")
    t.add_argument("--projective", metavar="V1,V2,...", help="summands for --endo")
    c = sub.add_parser("cycles", parents=[common], help="cycles and their certificates")
    c.add_argument("--max", type=int, default=None, dest="max_length", metavar="L")
    k = sub.add_parser("certify", parents=[common], help="certificates of infinite dimension only")
    k.add_argument("--cycles", type=int, default=None)
    sub.add_parser("dot", parents=[common], help="DOT rendering of the quiver and extension quiver")
    return p


# ---------------------------------------------------------------------------
# helpers


def load_description(source: str) -> AlgebraDescription:
    if source == "-":
        return parse(sys.stdin.read())
    path = FsPath(source)
    if path.is_file():
        return parse(path.read_text())
    if source.upper() in FIXTURE_NAMES:
        return parse(fixture_text(source.upper()))
    raise UsageError(f"no such file or fixture: {source}")


def _vertex_list(desc: AlgebraDescription, text: str) -> List[str]:
    vs = [v.strip() for v in text.split(",") if v.strip()]
    for v in vs:
        if v not in desc.vertices:
            raise UsageError(f"unknown vertex {v!r}")
    if not vs:
        raise UsageError("empty vertex list")
    return vs


def _element(desc: AlgebraDescription, A: BoundQuiverAlgebra, text: str):
    try:
        terms = parse_element_text(desc, text)
    except ParseError as exc:
        raise UsageError(f"in {text!r}: {exc}") from None
    return A.reduce_vector(terms_to_vector(A.quiver, A.field, terms))


def _endo_matrix(desc, A, text: str, summands: List[str]) -> LambdaMatrix:
    rows = [r for r in text.split(";")]
    ents = [[_element(desc, A, x) for x in row.split(",")] for row in rows]
    try:
        return LambdaMatrix(A, summands, summands, ents)
    except ValueError as exc:
        raise UsageError(f"bad endomorphism matrix: {exc}") from None


def _provenance(args, desc: AlgebraDescription, depth: int, cap: int) -> dict:
    return {"seed": args.seed, "depth": depth, "cap": cap, "max_dim": args.max_dim,
            "input": desc.name or None}


# ---------------------------------------------------------------------------
# commands


def cmd_analyze(args, desc, A, depth):
    lam = [list(e) for e in desc.option("lambda_e")] + [_vertex_list(desc, e) for e in args.e]
    opts = AnalysisOptions(depth=depth, cycles=args.cycles or desc.option("cycles"), lambda_e=lam,
                           max_dim=args.max_dim, seed=args.seed, threads=args.threads)
    report = analyze(A, opts)
    return analysis_json(A, report, consistency_audit(report))


def cmd_hh0(args, desc, A, depth):
    if args.e is None:
        B, e = A, None
    else:
        e = _vertex_list(desc, args.e)
        B = quotient_for(A, e).algebra
    H = hh0(B)
    return {"e": e, "algebra_dim": B.dim, "vertices": [str(v) for v in B.vertices],
            "arrows": [a.label for a in B.quiver.arrows], "dim": H.dim,
            "radical_trivial": is_radical_trivial(B),
            "basis": [element_text(x) for x in H.basis_representatives()]}


def cmd_resolve(args, desc, A, depth):
    if args.simple not in desc.vertices:
        raise UsageError(f"unknown vertex {args.simple!r}")
    B = A.opposite() if args.opposite else A
    res = simple_resolution(B, args.simple, depth, args.max_dim)
    per = None if res.terminated else find_syzygy_periodicity(res, seed=args.seed)
    if res.terminated:
        note = f"terminates: dimension {res.projective_dimension}"
    elif per is not None:
        note = f"Omega^{per[0]} = Omega^{per[1]} up to isomorphism: the resolution never terminates"
    else:
        note = f"no termination or periodicity within depth {depth}"
    return {"vertex": args.simple, "side": "injective" if args.opposite else "projective",
            "depth": depth, "terms": [[str(v) for v in t] for t in res.terms],
            "terminated": res.terminated, "dimension": res.projective_dimension,
            "ext_self": [res.top_multiplicity(i, args.simple) for i in range(1, len(res.terms))],
            "periodicity": None if per is None else [per[0], per[1]], "note": note}


def cmd_trace(args, desc, A, depth):
    e = _vertex_list(desc, args.e)
    rng = random.Random(args.seed)
    out = {"e": e, "horizon": None, "hs_trace": None}
    if args.endo is not None:
        if not args.projective:
            raise UsageError("--endo needs --projective")
        s = _vertex_list(desc, args.projective)
        phi = _endo_matrix(desc, A, args.endo, s)
        out["endomorphism"] = {"kind": "projective", "summands": s,
                               "matrix": [[element_text(x) for x in row] for row in phi.entries]}
        out["hs_trace"] = class_json(hs_trace(phi))
        out["e_trace"] = class_json(e_trace_projective(A, e, phi))
        return out
    ctx = TraceContext.build(A, e, depth, args.max_dim)
    if args.simple is not None:
        if args.simple not in desc.vertices:
            raise UsageError(f"unknown vertex {args.simple!r}")
        phi = ModuleHom.identity(simple(A, args.simple))
        out["endomorphism"] = {"kind": "simple", "vertex": args.simple}
    else:
        a = _element(desc, A, args.left)
        phi = left_multiplication(A, a)
        out["endomorphism"] = {"kind": "left", "element": element_text(a)}
    _, out["horizon"] = ctx.resolve(phi.source)
    out["e_trace"] = class_json(e_trace_module(A, e, phi, depth, rng=rng, context=ctx))
    return out


def cmd_cycles(args, desc, A, depth):
    L = args.max_length or desc.option("cycles")
    return {"max_length": L, "cycles": [cycle_json(A, cycle_certificate(A, c))
                                        for c in enumerate_cycles(A, L)]}


def cmd_certify(args, desc, A, depth):
    opts = AnalysisOptions(depth=depth, cycles=args.cycles or desc.option("cycles"),
                           max_dim=args.max_dim, seed=args.seed, threads=args.threads)
    report = analyze(A, opts)
    per = []
    for v in A.vertices:
        vr = report.vertices[v]
        for side, p in (("pd", vr.pd_periodicity), ("id", vr.id_periodicity)):
            if p is not None:
                per.append({"vertex": str(v), "side": side, "i": p[0], "j": p[1]})
    violations = consistency_audit(report)
    return {"loop_certificates": [loop_json(c) for c in report.loop_certificates],
            "cycle_certificates": [cycle_json(A, c) for c in report.cycle_certificates
                                   if c.cyclically_free],
            "periodicity_certificates": per, "gldim": status_json(report.gldim),
            "audit": {"passed": not violations, "violations": violations}}


def cmd_dot(args, desc, A, depth):
    from .noloop import extension_quiver

    ext = extension_quiver(A)
    return {"dot": dot_document(A, ext, desc.name),
            "extension_quiver": [{"source": str(i), "target": str(j), "multiplicity": m}
                                 for i, j, m in ext]}


HANDLERS = {"analyze": cmd_analyze, "hh0": cmd_hh0, "resolve": cmd_resolve, "trace": cmd_trace,
            "cycles": cmd_cycles, "certify": cmd_certify, "dot": cmd_dot}


# ---------------------------------------------------------------------------
# text rendering


def _status_text(s: dict) -> str:
    if s["kind"] == "finite":
        return str(s["value"])
    if s["kind"] == "infinite":
        return f"infinite ({s['reason']})"
    return f"unknown (depth {s['depth']})"


def _class_text(c: dict) -> str:
    return c["representative"]


def render_text(doc: ReportDocument) -> str:
    alg, res = doc.algebra, doc.result
    head = f"{alg['name'] or 'algebra'} over {alg['field']}: dim {alg['dim']}, " \
           f"{len(alg['vertices'])} vertices, {len(alg['arrows'])} arrows"
    lines = [head]
    cmd = doc.command
    if cmd == "analyze":
        lines.append(f"global dimension: {_status_text(res['gldim'])}")
        lines.append(f"HH_0: dim {res['hh0']['dim']}, radical-trivial: {res['hh0']['radical_trivial']}")
        for v in res["vertices"]:
            lines.append(f"  S_{v['vertex']}: pd {_status_text(v['pd'])}, id {_status_text(v['id'])}, "
                         f"Ext^1(S,S) dim {v['ext1_self']}")
        for c in res["loop_certificates"]:
            lines.append(f"loop at {c['vertex']} ({', '.join(c['loops'])}): {c['consequence']}")
        for c in res["cycle_certificates"]:
            if c["cyclically_free"]:
                lines.append(f"cyclically free cycle {c['cycle']} on {{{', '.join(c['support'])}}}: "
                             f"{c['consequence']}")
        for q in res["quotients"]:
            lines.append(f"A_e for e = {{{', '.join(q['vertices'])}}}: dim {q['dim']}, HH_0 dim "
                         f"{q['hh0_dim']}, radical-trivial: {q['radical_trivial']}, "
                         f"gldim {_status_text(q['gldim'])}")
        lines.append("audit: " + ("pass" if res["audit"]["passed"] else
                                  "FAIL: " + "; ".join(res["audit"]["violations"])))
    elif cmd == "hh0":
        where = "A" if res["e"] is None else f"A_e, e = {{{', '.join(res['e'])}}} (dim {res['algebra_dim']})"
        lines.append(f"HH_0({where}): dim {res['dim']}, radical-trivial: {res['radical_trivial']}")
        lines.append("basis: " + ", ".join(res["basis"]))
    elif cmd == "resolve":
        lines.append(f"{res['side']} resolution of S_{res['vertex']} to depth {res['depth']}:")
        for i, t in enumerate(res["terms"]):
            lines.append(f"  P_{i} = " + (" + ".join(f"P{v}" for v in t) or "0"))
        lines.append(res["note"])
    elif cmd == "trace":
        lines.append(f"e = {{{', '.join(res['e'])}}}, endomorphism: {res['endomorphism']['kind']}")
        if res["hs_trace"] is not None:
            lines.append(f"Hattori-Stallings trace: {_class_text(res['hs_trace'])}")
        if res["horizon"] is not None:
            lines.append(f"horizon: {res['horizon']}")
        lines.append(f"e-trace: {_class_text(res['e_trace'])}")
    elif cmd == "cycles":
        lines.append(f"cycles up to length {res['max_length']}: {len(res['cycles'])}")
        for c in res["cycles"]:
            lines.append(f"  {c['cycle']}: free {c['cyclically_free']}, nonzero {c['cyclically_nonzero']}")
    elif cmd == "certify":
        lines.append(f"global dimension: {_status_text(res['gldim'])}")
        for c in res["loop_certificates"]:
            lines.append(f"loop at {c['vertex']}: {c['consequence']}")
        for c in res["cycle_certificates"]:
            lines.append(f"cycle {c['cycle']}: {c['consequence']}")
        for c in res["periodicity_certificates"]:
            lines.append(f"S_{c['vertex']} ({c['side']}): Omega^{c['i']} = Omega^{c['j']}")
        lines.append("audit: " + ("pass" if res["audit"]["passed"] else "FAIL"))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# entry points


def run(args) -> ReportDocument:
    desc = load_description(args.algebra)
    cap = args.cap if args.cap is not None else desc.option("cap")
    depth = args.depth if args.depth is not None else desc.option("depth")
    if depth < 1 or cap < 2 or args.threads < 1:
        raise UsageError("--depth must be >= 1, --cap >= 2 and --threads >= 1")
    A = desc.build(cap=cap)
    result = HANDLERS[args.command](args, desc, A, depth)
    alg = algebra_json(A, desc.name, [render_terms(r) for r in desc.relations])
    return ReportDocument(args.command, _provenance(args, desc, depth, cap), alg, result)


def _emit(args, doc: ReportDocument, out) -> None:
    if args.json:
        text, ext = doc.to_json(), "json"
    elif doc.command == "dot":
        text, ext = doc.result["dot"], "dot"
    else:
        text, ext = render_text(doc), "txt"
    if args.output_dir:
        d = FsPath(args.output_dir)
        d.mkdir(parents=True, exist_ok=True)
        stem = doc.algebra["name"] or FsPath(args.algebra).stem or "algebra"
        target = d / f"{stem}-{doc.command}.{ext}"
        target.write_text(text)
        out.write(f"{target}\n")
    else:
        out.write(text)


def main(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        doc = run(args)
    except ParseError as exc:
        err.write(f"boundquiver: parse error: {exc}\n")
        return 1
    except UsageError as exc:
        err.write(f"boundquiver: {exc}\n")
        return 1
    except BoundQuiverError as exc:
        err.write(f"boundquiver: {type(exc).__name__}: {exc}\n")
        return 2
    try:
        _emit(args, doc, out)
    except OSError as exc:
        err.write(f"boundquiver: cannot write output: {exc}\n")
        return 1
    return 0


def main_entry() -> None:
    sys.exit(main())
