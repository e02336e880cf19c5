"""Command-line front end.

Exit codes: 0 success, 1 analysis refused (hypotheses not certified),
2 malformed input or structural error, 3 internal-consistency error (an
identity that must hold failed - always a bug).  Diagnostics go to stderr
as JSON; reports go to stdout, human-readable by default or as JSON with
--json.  No environment variables are consulted.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import catalogue, classification, core, genus, handles, invariants, recognition
from .errors import (AnalysisRefused, GemFormatError, GemkitError,
                     InternalConsistencyError, StructuralError)

SCHEMA = "gemkit-report/1"


def _load(path) -> core.ColoredGraph:
    try:
        return core.load_gem(path)
    except OSError as exc:
        raise GemFormatError(f"cannot read {path}: {exc}") from exc


def _base_report(path, g: core.ColoredGraph) -> dict:
    return {
        "schema_version": SCHEMA,
        "input": {
            "path": str(path),
            "canonical_code": core.canonical_code(g).hex(),
            "order": g.order,
            "colors": g.n_colors,
            "bipartite": core.is_bipartite(g),
        },
        "diagnostics": [],
    }


def _note_conditional(report: dict, section: str) -> None:
    if report.get(section, {}).get("conditional"):
        report["diagnostics"].append(
            f"{section}: conditional on uncertified sphere or pi1 claims")


def _render(report: dict, as_json: bool) -> str:
    if as_json:
        return json.dumps(report, sort_keys=True, indent=2) + "\n"
    lines = []

    def walk(prefix, value):
        if isinstance(value, dict):
            for key, item in value.items():
                walk(f"{prefix}{key}.", item)
        elif isinstance(value, list) and any(isinstance(x, (dict, list)) for x in value):
            for i, item in enumerate(value):
                walk(f"{prefix}{i}.", item)
        else:
            lines.append(f"{prefix[:-1]}: {value}")

    walk("", report)
    return "\n".join(lines) + "\n"


def cmd_info(args) -> dict:
    g = _load(args.path)
    report = _base_report(args.path, g)
    report["connected"] = core.is_connected(g)
    report["hat_residue_counts"] = {
        str(c): core.residue_count(g, core.complement_key((c,), g.n_colors))
        for c in g.colors}
    if g.n_colors >= 3 and core.is_connected(g):
        mc = recognition.check_closed_manifold(g)
        report["manifold_class"] = mc.to_json()
        _note_conditional(report, "manifold_class")
        if g.n_colors >= 4:
            ok, counts = recognition.is_crystallization(g)
            report["crystallization"] = ok
        report["euler_characteristic"] = invariants.euler_characteristic(g)
    return report


def cmd_genus(args) -> dict:
    g = _load(args.path)
    report = _base_report(args.path, g)
    full = genus.genus_all(g)
    section = full.to_json()
    if args.permutation:
        eps = _parse_permutation(args.permutation, g.n_colors)
        section["requested"] = {
            str(eps): genus.fraction_json(genus.genus_wrt(g, eps))}
    report["genus"] = section
    return report


def cmd_classify(args) -> dict:
    g = _load(args.path)
    report = _base_report(args.path, g)
    report["classification"] = classification.classification_report(g).to_json()
    _note_conditional(report, "classification")
    return report


def cmd_homology(args) -> dict:
    g = _load(args.path)
    report = _base_report(args.path, g)
    report["homology"] = invariants.homology(g).to_json()
    _note_conditional(report, "homology")
    pres = invariants.pi1_presentation(g)
    report["pi1_presentation"] = {
        "colors": list(pres.colors),
        "generators": pres.generator_count,
        "text": pres.to_text(),
        "trivialized": invariants.tietze_trivializes(pres),
    }
    return report


def cmd_handles(args) -> dict:
    g = _load(args.path)
    report = _base_report(args.path, g)
    report["handles"] = handles.handles_report(g).to_json()
    return report


def cmd_reduce(args) -> dict:
    g = _load(args.path)
    reduced = core.reduce(g)
    core.save_gem(reduced, args.out)
    return {"schema_version": SCHEMA, "input": str(args.path),
            "out": str(args.out), "order_before": g.order,
            "order_after": reduced.order}


def cmd_sum(args) -> dict:
    g1, g2 = _load(args.path1), _load(args.path2)
    s = core.connected_sum(g1, g2)
    core.save_gem(s, args.out)
    return {"schema_version": SCHEMA, "inputs": [str(args.path1), str(args.path2)],
            "out": str(args.out), "order": s.order}


def cmd_canon(args) -> dict:
    g = _load(args.path)
    flavor = core.COLOR_PRESERVING if args.color_preserving \
        else core.UP_TO_COLOR_PERMUTATION
    return {"schema_version": SCHEMA, "path": str(args.path),
            "flavor": flavor, "canonical_code": core.canonical_code(g, flavor).hex()}


def cmd_generate(args) -> dict:
    filters = tuple(f for f in (args.filters or "").split(",") if f)
    stats = catalogue.generate_catalogue(
        args.out, n_colors=args.colors, max_order=args.max_order,
        filters=filters, jobs=args.jobs, resume_meta=args.resume)
    return {"schema_version": SCHEMA, **stats}


def cmd_verify(args) -> dict:
    result = catalogue.verify_corpus(args.path)
    if not result["ok"]:
        raise InternalConsistencyError(
            f"{len(result['failures'])} corpus check(s) failed; first: "
            f"{result['failures'][0]}")
    return {"schema_version": SCHEMA, **result}


def _parse_permutation(text: str, k: int):
    body = text.strip().strip("()")
    try:
        seq = tuple(int(tok) for tok in body.replace(",", " ").split())
    except ValueError as exc:
        raise StructuralError(f"bad permutation {text!r}") from exc
    if len(seq) != k:
        raise StructuralError(f"permutation {text!r} has wrong length for {k} colors")
    return genus.CyclicPermutation.canonical(seq)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gemkit",
        description="Analyze edge-colored graphs encoding compact PL manifolds.")
    parser.add_argument("--json", action="store_true", help="emit the report as JSON")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_, config):
        p = sub.add_parser(name, help=help_)
        config(p)
        p.set_defaults(fn=fn)

    add("info", cmd_info, "basic counts and the manifold verdict",
        lambda p: p.add_argument("path"))
    add("genus", cmd_genus, "regular genus report",
        lambda p: (p.add_argument("path"),
                   p.add_argument("--permutation", help="cyclic order, e.g. (0,1,2,3,4)")))
    add("classify", cmd_classify, "t-values, weak-simple/simple, genus bounds",
        lambda p: p.add_argument("path"))
    add("homology", cmd_homology, "homology and pi1 presentation",
        lambda p: p.add_argument("path"))
    add("handles", cmd_handles, "handle-decomposition witnesses and profiles",
        lambda p: p.add_argument("path"))
    add("reduce", cmd_reduce, "eliminate proper dipoles and write the result",
        lambda p: (p.add_argument("path"), p.add_argument("out")))
    add("sum", cmd_sum, "graph connected sum",
        lambda p: (p.add_argument("path1"), p.add_argument("path2"),
                   p.add_argument("out")))
    add("canon", cmd_canon, "print the canonical code",
        lambda p: (p.add_argument("path"),
                   p.add_argument("--color-preserving", action="store_true")))
    add("generate", cmd_generate, "enumerate gems into a JSONL catalogue",
        lambda p: (p.add_argument("--colors", type=int, required=True),
                   p.add_argument("--max-order", type=int, required=True),
                   p.add_argument("--filters", default="",
                                  help="comma-separated: " + ",".join(catalogue.FILTERS)),
                   p.add_argument("--jobs", type=int, default=1),
                   p.add_argument("--resume", default=None,
                                  help="meta file of an interrupted run"),
                   p.add_argument("--out", required=True)))
    add("verify", cmd_verify, "replay all invariants over a catalogue",
        lambda p: p.add_argument("path"))
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report = args.fn(args)
    except GemFormatError as exc:
        _diag("format-error", exc)
        return 2
    except StructuralError as exc:
        _diag("structural-error", exc)
        return 2
    except AnalysisRefused as exc:
        _diag("analysis-refused", exc)
        return 1
    except InternalConsistencyError as exc:
        _diag("internal-consistency-error", exc)
        return 3
    except GemkitError as exc:
        _diag("error", exc)
        return 2
    sys.stdout.write(_render(report, args.json))
    return 0


def _diag(kind: str, exc: Exception) -> None:
    sys.stderr.write(json.dumps(
        {"error": {"type": kind, "message": str(exc)}}, sort_keys=True) + "\n")


if __name__ == "__main__":
    sys.exit(main())
