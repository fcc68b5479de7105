"""Command line entry point: parse graph files, run the pipeline, report.

Input format, line oriented, `#` starts a comment:

    field q            # or: field p 2     (optional; CLI flag overrides)
    vertex <name> <m>  # declaration order is the canonical vertex order
    edge <name> <name> <even label>

The pipeline normalizes the character, classifies the graph, computes the
homology modules by Smith normal form, and, where applicable, re-derives
the same answers by the multiplicity spectral sequence, rooted spanning
forests, and the resonant reduced complexes, cross-checking everything.

Exit codes: 0 ok, 1 usage, 2 bad input, 3 cross-check mismatch.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field as dc_field
from importlib import resources

from .flag import build_flag_complex, image_dims, reduced_homology_ranks
from .graphs import (Character, LabeledGraph, ZeroCharacterError,
                     connected_components, is_fc_type, resonance_sets,
                     torsion_support, validate_graph)
from .resonant import build_f2, build_gamma1, h1_free_rank, h2_free_rank
from .scalars import FieldSpec
from .smith import (ModuleDecomposition, boundary_smith_form,
                    decompose_torsion, verify_shape)
from .spectral import (ForestBudgetError, TorsionTable, forest_fitting_h1,
                       jordan_bound_check, page_dims, solve_torsion,
                       weighted_complex)
from .twisted import twisted_boundary

SCHEMA = "artinkernels-report/1"
ALL_METHODS = ("snf", "ss", "forest", "resonant")


class InputError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(message if line is None else f"line {line}: {message}")


@dataclass
class ParsedInput:
    graph: LabeledGraph
    character: Character
    field: FieldSpec | None


def parse_input(text: str) -> ParsedInput:
    vertices: list = []
    weights: dict = {}
    edges: list = []
    edge_seen: set = set()
    fspec: FieldSpec | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kw = parts[0].lower()
        if kw == "field":
            if fspec is not None:
                raise InputError("duplicate field line", lineno)
            try:
                fspec = FieldSpec.parse(" ".join(parts[1:]))
            except ValueError as exc:
                raise InputError(str(exc), lineno)
        elif kw == "vertex":
            if len(parts) != 3:
                raise InputError("expected: vertex <name> <weight>", lineno)
            name = parts[1]
            if name in weights:
                raise InputError(f"duplicate vertex {name!r}", lineno)
            try:
                weights[name] = int(parts[2])
            except ValueError:
                raise InputError(f"bad weight {parts[2]!r}", lineno)
            vertices.append(name)
        elif kw == "edge":
            if len(parts) != 4:
                raise InputError("expected: edge <name> <name> <label>", lineno)
            u, v = parts[1], parts[2]
            for name in (u, v):
                if name not in weights:
                    raise InputError(f"unknown vertex {name!r} in edge", lineno)
            if u == v:
                raise InputError("loops are not allowed", lineno)
            key = frozenset((u, v))
            if key in edge_seen:
                raise InputError(f"duplicate edge {u}-{v}", lineno)
            edge_seen.add(key)
            try:
                label = int(parts[3])
            except ValueError:
                raise InputError(f"bad label {parts[3]!r}", lineno)
            if label < 2:
                raise InputError(f"label {label} is < 2", lineno)
            if label % 2 != 0:
                raise InputError(f"odd label {label}", lineno)
            edges.append((u, v, label))
        else:
            raise InputError(f"unknown directive {parts[0]!r}", lineno)
    if not vertices:
        raise InputError("empty graph: no vertices declared")
    graph = LabeledGraph(vertices, edges)
    return ParsedInput(graph, Character(graph, weights), fspec)


def serialize_input(g: LabeledGraph, c: Character, fspec: FieldSpec | None) -> str:
    lines = []
    if fspec is not None:
        lines.append("field q" if fspec.p is None else f"field p {fspec.p}")
    for v in g.vertices:
        lines.append(f"vertex {v} {c.m(v)}")
    for (u, v) in g.edge_list:
        lines.append(f"edge {u} {v} {g.ell(u, v)}")
    return "\n".join(lines) + "\n"


@dataclass
class JobConfig:
    input_path: str | None = None
    text: str | None = None
    field: FieldSpec | None = None
    k_max: int | None = None
    methods: tuple = ALL_METHODS
    fmt: str = "text"
    cross_check: bool = True
    dump_pages: bool = False
    dump_matrices: bool = False
    forest_budget: int | None = None

    def __post_init__(self):
        if not self.methods:
            raise ValueError("at least one method is required")
        bad = [m for m in self.methods if m not in ALL_METHODS]
        if bad:
            raise ValueError(f"unknown methods: {bad}")


@dataclass
class Report:
    data: dict
    timing: dict = dc_field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.data["status"]["ok"]

    def to_json(self) -> str:
        payload = dict(self.data)
        payload["timing"] = self.timing
        return json.dumps(payload, indent=2)

    def to_text(self) -> str:
        d = self.data
        lines = [f"field {d['input']['field']}; "
                 f"normalization divisor {d['input']['normalization_divisor']}"]
        cls = d["classification"]
        lines.append(f"fc-type: {cls['fc_type']}; connected: {cls['connected']}; "
                     f"clique dimension: {cls['clique_dimension']}")
        res = d["resonance"]
        lines.append(f"resonant vertices: {res['vertices'] or '-'}; "
                     f"resonant edges: {res['edges'] or '-'}")
        ts = d["torsion_support"]
        lines.append("torsion support: " +
                     (str(ts["values"]) if ts["available"] else f"unavailable ({ts['reason']})"))
        for mod in d["homology"]["modules"]:
            facs = " + ".join(f"({f})" for f in mod["invariant_factors"]) or "-"
            lines.append(f"H_{mod['homology_degree']}: free rank {mod['free_rank']}, "
                         f"torsion {facs}")
        for chk in d["cross_checks"]:
            mark = "ok" if chk["agree"] else "MISMATCH"
            lines.append(f"[{mark}] {chk['subject']} ({' vs '.join(chk['methods'])})"
                         + (f": {chk['detail']}" if chk["detail"] else ""))
        status = d["status"]
        lines.append(f"status: {'ok' if status['ok'] else 'cross-check mismatch'}")
        return "\n".join(lines)


def _poly_list(polys) -> list:
    return [str(p) for p in polys]


def run(job: JobConfig) -> Report:
    t0 = time.perf_counter()
    if job.text is not None:
        text = job.text
    elif job.input_path is not None:
        with open(job.input_path, "r", encoding="utf-8") as fh:
            text = fh.read()
    else:
        raise InputError("no input given")
    parsed = parse_input(text)
    g = parsed.graph
    fspec = job.field or parsed.field or FieldSpec()
    report_validation = validate_graph(g)
    if not report_validation.ok:
        raise InputError("; ".join(report_validation.issues))
    try:
        character, divisor = parsed.character.normalize()
    except ZeroCharacterError as exc:
        raise InputError(str(exc))

    fc = build_flag_complex(g)
    k_max = fc.dim if job.k_max is None else max(0, min(job.k_max, fc.dim))
    ranks = reduced_homology_ranks(fc, fspec)
    imdims = image_dims(fc, fspec)
    res = resonance_sets(g, character, fspec)
    connected = len(connected_components(g)) == 1

    ts_avail = all(character.m(v) != 0 for v in g.vertices)
    support = torsion_support(g, character) if ts_avail else None

    data: dict = {
        "schema": SCHEMA,
        "input": {
            "path": job.input_path,
            "field": str(fspec),
            "vertices": [{"name": v, "weight": parsed.character.m(v)} for v in g.vertices],
            "edges": [{"u": u, "v": v, "label": g.ell(u, v)} for (u, v) in g.edge_list],
            "normalization_divisor": divisor,
            "normalized_weights": {v: character.m(v) for v in g.vertices},
        },
        "classification": {
            "valid": report_validation.ok,
            "issues": list(report_validation.issues),
            "fc_type": is_fc_type(g),
            "connected": connected,
            "clique_dimension": fc.dim,
            "simplex_counts": {str(k): n for k, n in fc.counts().items()},
        },
        "resonance": {
            "vertices": sorted(res.resonant_vertices),
            "edges": [f"{u}-{v}" for (u, v) in sorted(res.resonant_edges)],
            "k_nonresonant": res.is_K_nonresonant,
        },
        "torsion_support": (
            {"available": True, "values": list(support.values),
             "provenance": {str(d): sorted(support.provenance[d]) for d in support.values}}
            if support is not None
            else {"available": False, "reason": "character has a zero weight",
                  "values": []}),
        "flag_homology": {"reduced_ranks": ranks, "image_dims": imdims},
    }

    # Smith normal form spine: boundaries and their diagonalizations per degree
    boundaries = {k: twisted_boundary(fc, character, fspec, k)
                  for k in range(0, k_max + 2)}
    snfs = {k: boundary_smith_form(m, fc, character, fspec)
            for k, m in boundaries.items()}
    decs: dict[int, ModuleDecomposition] = {}
    modules = []
    for k in range(0, k_max + 1):
        invariant, terms, primary, t1, unknown = decompose_torsion(snfs[k + 1], fspec)
        free = len(fc.simplices_of(k)) - snfs[k].rank - snfs[k + 1].rank
        dec = ModuleDecomposition(k=k, fspec=fspec, free_rank=free,
                                  invariant_factors=invariant, factor_terms=terms,
                                  primary_parts=primary, t_minus_1_exponent=t1,
                                  unidentified=unknown)
        decs[k] = dec
        entry = {
            "k": k,
            "homology_degree": k + 1,
            "free_rank": dec.free_rank,
            "invariant_factors": _poly_list(dec.invariant_factors),
            "t_minus_1_exponent": dec.t_minus_1_exponent,
        }
        if dec.primary_parts is not None:
            entry["primary_parts"] = {str(d): list(v)
                                      for d, v in sorted(dec.primary_parts.items())}
        if support is not None:
            shape = verify_shape(dec, support, imdims, ranks, res, g, character)
            entry["shape"] = {
                "skipped": shape.skipped,
                "checks": [{"name": c.name, "status": c.status, "detail": c.detail}
                           for c in shape.checks],
                "ok": shape.ok,
            }
        modules.append(entry)
    data["homology"] = {"k_max": k_max, "modules": modules}
    if job.dump_matrices:
        data["matrices"] = {str(k): boundaries[k].dump() for k in boundaries}

    cross_checks: list = []
    methods: dict = {"snf": {"ran": True}}

    # multiplicity spectral sequence (characteristic zero, non-resonant)
    want_ss = "ss" in job.methods
    ss_applicable = fspec.char == 0 and res.is_K_nonresonant and support is not None
    if want_ss and ss_applicable:
        table = TorsionTable()
        pages_out = {}
        for d in support.values:
            wc = weighted_complex(fc, character, d)
            pt = page_dims(wc)
            ns = solve_torsion(pt, ranks, k_max)
            for k, row in ns.items():
                table.put(k, d, row)
            if job.dump_pages:
                pages_out[str(d)] = {
                    "max_weight": pt.max_weight,
                    "dims": {f"s={s} p={p} q={q}": v
                             for (s, p, q), v in pt.nonzero().items()},
                    "stable": {f"p={p} q={q}": v
                               for (p, q), v in sorted(pt.stable.items())},
                }
        methods["ss"] = {
            "ran": True,
            "jordan_bound_ok": jordan_bound_check(table),
            "multiplicities": {f"k={k} d={d}": list(row)
                               for (k, d), row in sorted(table.entries.items())},
        }
        if job.dump_pages:
            methods["ss"]["pages"] = pages_out
        if job.cross_check:
            for k in range(0, k_max + 1):
                for d in support.values:
                    got = table.exponent_multiset(k, d)
                    want = decs[k].exponents_for(d)
                    cross_checks.append({
                        "subject": f"Phi_{d} exponents in degree {k + 1}",
                        "methods": ["snf", "ss"],
                        "agree": got == want,
                        "detail": f"ss={list(got)} snf={list(want)}",
                    })
                cross_checks.append({
                    "subject": f"free rank in degree {k + 1}",
                    "methods": ["snf", "ss"],
                    "agree": decs[k].free_rank == ranks[k],
                    "detail": f"snf={decs[k].free_rank} stable-page={ranks[k]}",
                })
    elif want_ss:
        methods["ss"] = {"ran": False, "reason": (
            "needs characteristic zero" if fspec.char != 0
            else "needs a non-resonant character")}

    # rooted spanning forests (degree 0 torsion)
    want_forest = "forest" in job.methods
    if want_forest and res.is_K_nonresonant and connected:
        try:
            factors = forest_fitting_h1(g, character, fspec, job.forest_budget)
        except ForestBudgetError as exc:
            methods["forest"] = {"ran": False, "reason": str(exc)}
        else:
            methods["forest"] = {"ran": True, "invariant_factors": _poly_list(factors)}
            if job.cross_check:
                snf_facts = snfs[1].invariant_factors
                cross_checks.append({
                    "subject": "H_1 invariant factors",
                    "methods": ["snf", "forest"],
                    "agree": factors == snf_facts,
                    "detail": f"forest={_poly_list(factors)} snf={_poly_list(snf_facts)}",
                })
    elif want_forest:
        methods["forest"] = {"ran": False, "reason": (
            "needs a connected graph" if res.is_K_nonresonant
            else "needs a K non-resonant character")}

    # reduced-complex free ranks (valid resonant or not)
    if "resonant" in job.methods:
        gamma1 = build_gamma1(g, character, fspec)
        h1 = h1_free_rank(g, character, fspec)
        qc = build_f2(g, character, fspec)
        h2 = h2_free_rank(g, character, fspec)
        methods["resonant"] = {
            "ran": True,
            "h1_free_rank": h1,
            "h2_free_rank": h2,
            "gamma1": {
                "vertices": list(gamma1.graph.vertices),
                "edges": [f"{u}-{v}" for (u, v) in gamma1.graph.edge_list],
                "removal_log": gamma1.removal_log(),
            },
            "f2": {
                "cells": [len(qc.cells0), len(qc.cells1), len(qc.cells2)],
                "identifications": [f"{u}~{v}" for (u, v) in qc.identifications],
                "removal_log": list(qc.removal_log),
            },
        }
        if job.cross_check:
            cross_checks.append({
                "subject": "H_1 free rank",
                "methods": ["snf", "resonant"],
                "agree": decs[0].free_rank == h1,
                "detail": f"snf={decs[0].free_rank} reduced-graph={h1}",
            })
            if k_max >= 1:
                cross_checks.append({
                    "subject": "H_2 free rank",
                    "methods": ["snf", "resonant"],
                    "agree": decs[1].free_rank == h2,
                    "detail": f"snf={decs[1].free_rank} quotient-complex={h2}",
                })

    # disconnected graphs: degree-0 torsion splits over the components
    if job.cross_check and not connected:
        whole = sorted(_poly_list(snfs[1].nontrivial_factors))
        pieces = []
        for comp in connected_components(g):
            sub = LabeledGraph(comp, [(u, v, g.ell(u, v)) for (u, v) in g.edge_list
                                      if u in comp and v in comp])
            sub_chi = character.restrict(sub)
            sub_fc = build_flag_complex(sub)
            sub_snf = boundary_smith_form(
                twisted_boundary(sub_fc, sub_chi, fspec, 1), sub_fc, sub_chi, fspec)
            pieces.extend(_poly_list(sub_snf.nontrivial_factors))
        cross_checks.append({
            "subject": "H_1 torsion splits over components",
            "methods": ["snf", "snf-per-component"],
            "agree": whole == sorted(pieces),
            "detail": f"whole={whole} pieces={sorted(pieces)}",
        })

    data["methods"] = methods
    data["cross_checks"] = cross_checks
    mismatches = sum(1 for c in cross_checks if not c["agree"])
    data["status"] = {"ok": mismatches == 0, "mismatches": mismatches}
    timing = {"total_seconds": round(time.perf_counter() - t0, 6)}
    return Report(data, timing)


# ---------------------------------------------------------------------------
# fixtures and self-check
# ---------------------------------------------------------------------------

FIXTURES = ("dihedral4", "square", "square_diagonal", "square_diagonal_chi2")


def fixture_text(name: str) -> str:
    return resources.files("artinkernels.fixtures").joinpath(f"{name}.graph").read_text()


def self_check(out=sys.stdout) -> int:
    """Run every bundled fixture under its natural fields with all methods."""
    combos = [
        ("dihedral4", FieldSpec()), ("dihedral4", FieldSpec(2)),
        ("square", FieldSpec()),
        ("square_diagonal", FieldSpec(2)), ("square_diagonal", FieldSpec()),
        ("square_diagonal_chi2", FieldSpec(2)),
    ]
    bad = 0
    for name, fspec in combos:
        job = JobConfig(text=fixture_text(name), field=fspec, fmt="text")
        rep = run(job)
        verdict = "ok" if rep.ok else "MISMATCH"
        summary = "; ".join(
            f"H_{m['homology_degree']}=free^{m['free_rank']}"
            + ("+" + "+".join(f"({f})" for f in m["invariant_factors"])
               if m["invariant_factors"] else "")
            for m in rep.data["homology"]["modules"])
        print(f"[{verdict}] {name} over {fspec}: {summary}", file=out)
        if not rep.ok:
            bad += 1
    return 0 if bad == 0 else 3


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(1)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="artinkernels",
                description="Homology of Artin kernels of even FC-type Artin "
                            "groups as K[t^±1]-modules, by cross-checking "
                            "exact methods.")
    p.add_argument("input", nargs="?", help="graph file (see README for the format)")
    p.add_argument("--field", type=FieldSpec.parse, default=None,
                   help="q for rationals, p:<prime> for GF(p); overrides the file")
    p.add_argument("--kmax", type=int, default=None,
                   help="largest chain degree k to decompose (default: clique dimension)")
    p.add_argument("--methods", default=",".join(ALL_METHODS),
                   help="comma separated subset of snf,ss,forest,resonant")
    p.add_argument("--format", dest="fmt", choices=("text", "json"), default="text")
    p.add_argument("--no-cross-check", action="store_true",
                   help="skip method-agreement checks (exit code 3 disabled)")
    p.add_argument("--dump-pages", action="store_true",
                   help="include spectral page tables in the report")
    p.add_argument("--dump-matrices", action="store_true",
                   help="include twisted boundary matrices in the report")
    p.add_argument("--selfcheck", action="store_true",
                   help="run the bundled fixtures and exit")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    if args.selfcheck:
        return self_check()
    if args.input is None:
        parser.print_usage(sys.stderr)
        print("error: an input file is required (or --selfcheck)", file=sys.stderr)
        return 1
    methods = tuple(m.strip() for m in args.methods.split(",") if m.strip())
    try:
        job = JobConfig(input_path=args.input, field=args.field, k_max=args.kmax,
                        methods=methods, fmt=args.fmt,
                        cross_check=not args.no_cross_check,
                        dump_pages=args.dump_pages,
                        dump_matrices=args.dump_matrices)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        report = run(job)
    except (InputError, OSError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    print(report.to_json() if job.fmt == "json" else report.to_text())
    if job.cross_check and not report.ok:
        return 3
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
