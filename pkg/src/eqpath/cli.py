"""Command-line front end.

    eqpath ph|eqph|rel|cohom|export --digraph F [--group F] [--subgraph F]
           --coeff z|q|fp:P --max-degree N [--mode model|direct|verify]
           [--output table|json] [--level-budget N]

Exit codes: 0 ok, 1 verify mismatch, 2 parse error, 3 size budget exceeded,
4 internal invariant failure, 5 invalid group action, 6 not a subgraph or
not invariant, 7 field coefficients required.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import __version__
from .digraph import (
    DEFAULT_LEVEL_BUDGET,
    DanglingEdge,
    LevelExplosion,
    NotSubgraph,
    ParseError,
    glmy_complex,
    load_digraph,
    load_subgraph,
)
from .groups import (
    DigraphAction,
    NotInvariant,
    OrderExceeded,
    borel_marked,
    group_closure,
    load_group,
    validate_digraph_action,
)
from .linalg import CompositionNonzero, HomologyGroup, Ring, SolveFailure, invariant_factors, rank
from .marked import NonFieldRing, path_complex
from .model import (
    ImageEscapesOmega,
    borel_cochain_dims,
    dual_model,
    equivariant_model,
    psi_omega,
    relative_model,
)
from .sset import CapExceeded

SCHEMA_VERSION = 1

EXIT_MISMATCH = 1
EXIT_PARSE = 2
EXIT_BUDGET = 3
EXIT_INTERNAL = 4
EXIT_ACTION = 5
EXIT_SUBGRAPH = 6
EXIT_FIELD = 7


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


@dataclass
class JobConfig:
    command: str
    digraph: Path
    group: Path | None = None
    subgraph: Path | None = None
    coeff: Ring = field(default_factory=lambda: Ring.parse("z"))
    max_degree: int = 3
    mode: str = "model"
    output: str = "table"
    level_budget: int = DEFAULT_LEVEL_BUDGET


@dataclass
class ResultDocument:
    command: str
    coeff: str
    inputs: dict
    records: list[dict]
    timing: dict
    warnings: list[str] = field(default_factory=list)
    checks: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        doc = {"version": __version__, "schema": SCHEMA_VERSION, "command": self.command,
               "coeff": self.coeff, "inputs": self.inputs, "homology": self.records,
               "timing": self.timing, "warnings": self.warnings}
        if self.checks:
            doc["checks"] = self.checks
        return doc


def homology_records(groups: list[HomologyGroup], certified_through: int) -> list[dict]:
    return [{"degree": d, "free_rank": h.free_rank, "torsion": list(h.torsion),
             "certified": d <= certified_through} for d, h in enumerate(groups)]


def dimension_records(dims: list[int], certified_through: int) -> list[dict]:
    return [{"degree": d, "free_rank": n, "torsion": [], "certified": d <= certified_through}
            for d, n in enumerate(dims)]


def _read(path: Path) -> tuple[str, str]:
    data = path.read_bytes()
    return data.decode("utf-8"), hashlib.sha256(data).hexdigest()


class Job:
    def __init__(self, cfg: JobConfig):
        self.cfg = cfg
        self.inputs: dict = {}
        text, digest = _read(cfg.digraph)
        self.inputs["digraph"] = {"path": str(cfg.digraph), "sha256": digest}
        self.graph = load_digraph(text)
        self.action = self._load_action()
        self.sub = None
        if cfg.subgraph is not None:
            text, digest = _read(cfg.subgraph)
            self.inputs["subgraph"] = {"path": str(cfg.subgraph), "sha256": digest}
            self.sub = load_subgraph(text, self.graph)

    def _load_action(self) -> DigraphAction:
        G = self.graph
        if self.cfg.group is None:
            return DigraphAction(group_closure([], degree=max(G.ids, default=-1) + 1), G)
        text, digest = _read(self.cfg.group)
        self.inputs["group"] = {"path": str(self.cfg.group), "sha256": digest}
        A = load_group(text, G)
        report = validate_digraph_action(G, A)
        if not report.ok:
            v = report.violations[0]
            gen = A.group.generators.index(v.indices[0])
            raise CliError(EXIT_ACTION, f"generator {gen} does not preserve edge {v.simplex[0]} -> {v.simplex[1]}")
        return A


def _mismatch(name: str, a: list, b: list) -> str | None:
    for d, (x, y) in enumerate(zip(a, b)):
        if x != y:
            return f"{name}: degree {d} differs: {x} vs {y}"
    if len(a) != len(b):
        return f"{name}: different number of degrees ({len(a)} vs {len(b)})"
    return None


def _fmt(groups) -> list[str]:
    return [str(g) for g in groups]


def cmd_ph(job: Job) -> ResultDocument:
    cfg = job.cfg
    pc = glmy_complex(job.graph, cfg.coeff, cfg.max_degree + 1)
    return ResultDocument("ph", str(cfg.coeff), job.inputs,
                          homology_records(pc.homology(cfg.max_degree), cfg.max_degree), {})


def _psi_checks(A: DigraphAction, pc, borel, mc, maxdeg: int) -> list[str]:
    problems = []
    mats = psi_omega(A, pc, borel, maxdeg)
    for d, m in enumerate(mats):
        if m.rows != m.cols:
            problems.append(f"psi: degree {d} matrix is {m.rows}x{m.cols}")
            continue
        if m.ring.kind == "ZZ":
            if any(f != 1 for f in invariant_factors(m)):
                problems.append(f"psi: degree {d} matrix is not unimodular")
        elif rank(m) != m.rows:
            problems.append(f"psi: degree {d} matrix is singular")
        if d and not (borel.differentials[d] @ m == mats[d - 1] @ mc.differentials[d]):
            problems.append(f"psi: degree {d} does not commute with the differentials")
    return problems


def cmd_eqph(job: Job) -> ResultDocument:
    cfg = job.cfg
    A, top = job.action, cfg.max_degree
    doc = ResultDocument("eqph", str(cfg.coeff), job.inputs, [], {})
    model_h = direct_h = None
    if cfg.mode in ("model", "verify"):
        mc, pc = equivariant_model(A, cfg.coeff, top)
        model_h = mc.homology(top)
    if cfg.mode in ("direct", "verify"):
        borel = path_complex(borel_marked(A, top + 1, cfg.level_budget), cfg.coeff, top + 1)
        direct_h = borel.homology(top)
    doc.records = homology_records(model_h if model_h is not None else direct_h, top)
    if cfg.mode == "verify":
        problems = []
        msg = _mismatch("model vs direct", _fmt(model_h), _fmt(direct_h))
        if msg:
            problems.append(msg)
        problems += _psi_checks(A, pc, borel, mc, top)
        doc.checks = {"model": _fmt(model_h), "direct": _fmt(direct_h), "problems": problems}
    return doc


def cmd_rel(job: Job) -> ResultDocument:
    cfg = job.cfg
    if job.sub is None:
        raise CliError(EXIT_PARSE, "rel needs --subgraph")
    compare = cfg.mode in ("direct", "verify")
    res = relative_model(job.action, job.sub, cfg.coeff, cfg.max_degree, compare=compare)
    groups = res.borel_homology if cfg.mode == "direct" else res.model_homology
    doc = ResultDocument("rel", str(cfg.coeff), job.inputs, homology_records(groups, cfg.max_degree), {})
    if cfg.mode == "verify":
        problems = []
        msg = _mismatch("model vs direct", _fmt(res.model_homology), _fmt(res.borel_homology))
        if msg:
            problems.append(msg)
        doc.checks = {"model": _fmt(res.model_homology), "direct": _fmt(res.borel_homology), "problems": problems}
        if res.omega_u_homology is not None:
            msg = _mismatch("model vs omega-U", _fmt(res.model_homology), _fmt(res.omega_u_homology))
            if msg:
                problems.append(msg)
            doc.checks["omega_u"] = _fmt(res.omega_u_homology)
        else:
            doc.warnings.append("edges run from the complement into the subgraph; omega-U comparison skipped")
    return doc


def cmd_cohom(job: Job) -> ResultDocument:
    cfg = job.cfg
    if not cfg.coeff.is_field:
        raise NonFieldRing("cohomology needs field coefficients (q or fp:P)")
    A, top = job.action, cfg.max_degree
    model_d = direct_d = None
    if cfg.mode in ("model", "verify"):
        model_d = dual_model(A, cfg.coeff, top).cohomology_dims()
    if cfg.mode in ("direct", "verify"):
        direct_d = borel_cochain_dims(A, cfg.coeff, top)
    doc = ResultDocument("cohom", str(cfg.coeff), job.inputs,
                         dimension_records(model_d if model_d is not None else direct_d, top), {})
    if cfg.mode == "verify":
        msg = _mismatch("model vs direct", model_d, direct_d)
        doc.checks = {"model": model_d, "direct": direct_d, "problems": [msg] if msg else []}
    return doc


# ---------------------------------------------------------------------------
# export


def _entry(x):
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else x.numerator
    return int(x)


def _parse_entry(x, ring: Ring):
    return ring(Fraction(x) if isinstance(x, str) else x)


def export_document(job: Job) -> dict:
    """Bases and differentials of the model (or the GLMY complex when no group is given)."""
    cfg = job.cfg
    G, top = job.graph, cfg.max_degree
    mc, pc = equivariant_model(job.action, cfg.coeff, top)
    omega = []
    for k in range(pc.valid_through + 1):
        omega.append([[[[G.name(v) for v in p], _entry(c)] for p, c in sorted(pc.omega_chain(k, j).items())]
                      for j in range(pc.rank(k))])
    degrees = []
    for d in range(mc.valid_through + 1):
        degrees.append({
            "degree": d,
            "basis": [{"bar": list(x), "chain_degree": k, "chain_index": j} for x, k, j in mc.basis[d]],
            "differential": [[_entry(v) for v in row] for row in mc.differentials[d].to_lists()],
            "shape": list(mc.differentials[d].shape),
        })
    return {"version": __version__, "schema": SCHEMA_VERSION, "kind": "model", "coeff": str(cfg.coeff),
            "inputs": job.inputs, "group": [list(p) for p in job.action.group.perms],
            "omega": omega, "degrees": degrees}


def ring_from_label(label: str) -> Ring:
    return Ring.parse({"Z": "z", "Q": "q"}.get(label, label.replace("F_", "fp:")))


def import_document(doc: dict) -> dict:
    """Parse an export back into exact matrices keyed by degree."""
    from .linalg import Matrix
    ring = ring_from_label(doc["coeff"])
    out = {}
    for deg in doc["degrees"]:
        rows, cols = deg["shape"]
        data = [[_parse_entry(v, ring) for v in row] for row in deg["differential"]]
        out[deg["degree"]] = (
            [(tuple(b["bar"]), b["chain_degree"], b["chain_index"]) for b in deg["basis"]],
            Matrix(data, ring, cols),
        )
    return out


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="eqpath", description="Path homology of digraphs and its Borel equivariant version.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in [("ph", "GLMY path homology"),
                            ("eqph", "equivariant path homology"),
                            ("rel", "relative equivariant path homology"),
                            ("cohom", "equivariant path cohomology over a field"),
                            ("export", "dump bases and differentials of the model as JSON")]:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--digraph", type=Path, required=True)
        p.add_argument("--group", type=Path)
        p.add_argument("--subgraph", type=Path)
        p.add_argument("--coeff", default="z", help="z, q or fp:P")
        p.add_argument("--max-degree", type=int, default=3)
        p.add_argument("--mode", choices=["model", "direct", "verify"], default="model")
        p.add_argument("--output", choices=["table", "json"], default="table")
        p.add_argument("--level-budget", type=int, default=DEFAULT_LEVEL_BUDGET)
    return parser


def parse_config(argv: list[str] | None = None) -> JobConfig:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        coeff = Ring.parse(args.coeff)
    except ValueError as exc:
        parser.error(f"--coeff: {exc}")
    if args.max_degree < 0:
        parser.error("--max-degree must be nonnegative")
    return JobConfig(args.command, args.digraph, args.group, args.subgraph, coeff,
                     args.max_degree, args.mode, args.output, args.level_budget)


def render_table(doc: ResultDocument) -> str:
    lines = [f"{doc.command}  coefficients {doc.coeff}", f"{'degree':>6}  {'group':<24} certified"]
    for r in doc.records:
        if doc.command == "cohom":
            text = f"dim {r['free_rank']}"
        else:
            text = str(HomologyGroup(r["free_rank"], tuple(r["torsion"]), ring_from_label(doc.coeff)))
        lines.append(f"{r['degree']:>6}  {text:<24} {'yes' if r['certified'] else 'no'}")
    for w in doc.warnings:
        lines.append(f"warning: {w}")
    for p in doc.checks.get("problems", []):
        lines.append(f"MISMATCH {p}")
    if doc.checks and not doc.checks.get("problems"):
        lines.append("verify: all checks passed")
    return "\n".join(lines)


COMMANDS = {"ph": cmd_ph, "eqph": cmd_eqph, "rel": cmd_rel, "cohom": cmd_cohom}


def run(cfg: JobConfig, out=None) -> int:
    out = out or sys.stdout
    start = time.perf_counter()
    job = Job(cfg)
    if cfg.command == "export":
        print(json.dumps(export_document(job), indent=1), file=out)
        return 0
    doc = COMMANDS[cfg.command](job)
    doc.timing = {"seconds": round(time.perf_counter() - start, 6)}
    if cfg.output == "json":
        print(json.dumps(doc.to_json(), indent=1), file=out)
    else:
        print(render_table(doc), file=out)
    return EXIT_MISMATCH if doc.checks.get("problems") else 0


def main(argv: list[str] | None = None) -> int:
    cfg = parse_config(argv)
    try:
        return run(cfg)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (ParseError, DanglingEdge, json.JSONDecodeError, OSError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (LevelExplosion, CapExceeded, OrderExceeded) as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (NotSubgraph, NotInvariant) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SUBGRAPH
    except NonFieldRing as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FIELD
    except (CompositionNonzero, SolveFailure, ImageEscapesOmega) as exc:
        print(f"internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
