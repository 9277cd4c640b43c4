"""Command-line interface: reports, maps, metric checks, sweeps, transport and the example corpus.

Exit codes: 0 success, 1 invalid input, 2 a PAPER-tagged expectation failed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from pathlib import Path
from typing import Any, Iterable, Mapping, Sequence

from .cohomology import (
    compute_profile,
    map_F,
    map_P,
    map_S,
    map_S_exactness,
    map_Sstar,
    map_Sstar_Tstar,
    map_T,
    map_Tstar,
)
from .corpus import CORPUS, corpus_names, get_entry, grid_points, metric_from_spec, run_all, sweep
from .exactfield import gr
from .exterior import Form, standard_metric
from .hodge import transport_gauduchon
from .metrics import KINDS, check_metric, positive_feasibility
from .structure import (
    FamilySpec,
    StructureEquations,
    StructureError,
    family_from_dict,
    family_instantiate,
    is_family_doc,
    structure_from_dict,
    validate,
)

FORMATS = ("table", "json", "csv")


class InputError(Exception):
    """Bad command-line input; reported with exit code 1."""


# ---------------------------------------------------------------------------
# input resolution


def load_input(arg: str) -> tuple[StructureEquations | FamilySpec, Mapping[str, Any] | None]:
    """Corpus name or path to a structure/family JSON file."""
    if arg in corpus_names():
        entry = get_entry(arg)
        doc = entry["doc"]
    else:
        path = Path(arg)
        if not path.is_file():
            raise InputError(f"{arg!r} is neither a corpus entry nor a file; try 'examples list'")
        try:
            doc = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise InputError(f"{arg}: invalid JSON: {exc}") from exc
        entry = None
    if is_family_doc(doc):
        return family_from_dict(doc), entry
    return structure_from_dict(doc), entry


def split_list(text: str) -> list[str]:
    """Split on commas outside parentheses."""
    out, depth, cur = [], 0, []
    for ch in text:
        if ch == "," and depth == 0:
            out.append("".join(cur).strip())
            cur = []
            continue
        depth += ch == "("
        depth -= ch == ")"
        cur.append(ch)
    out.append("".join(cur).strip())
    return [x for x in out if x]


def parse_assignments(items: Sequence[str] | None) -> dict[str, list[str]]:
    out: dict[str, list[str]] = {}
    for item in items or []:
        if "=" not in item:
            raise InputError(f"expected name=value[,value...], got {item!r}")
        name, values = item.split("=", 1)
        out[name.strip()] = split_list(values)
    return out


def fibre(obj, t: str | None, at: Sequence[str] | None) -> StructureEquations:
    """The structure itself, or a family fibre chosen by --t / --at (base point by default)."""
    if isinstance(obj, StructureEquations):
        if t is not None or at:
            raise InputError("--t/--at only apply to families")
        return obj
    env = dict(obj.base_env())
    for name, values in parse_assignments(at).items():
        if len(values) != 1:
            raise InputError(f"--at {name} takes a single value here")
        env[name] = gr(values[0])
    if t is not None:
        values = split_list(t)
        if len(values) != 1 or "t" not in obj.params:
            raise InputError("--t takes a single value and the family must have parameter t")
        env["t"] = gr(values[0])
    return family_instantiate(obj, env)


def load_metric(arg: str | None, s: StructureEquations, entry) -> tuple[str, Form]:
    """Metric from a JSON file ({"diag": [...]} or {"h": [[...]]}), a declared name, or 'standard'."""
    if arg is None or arg == "standard":
        return "standard", standard_metric(s.n)
    if entry and arg in entry.get("metrics", {}):
        return arg, metric_from_spec(s.n, entry["metrics"][arg])
    path = Path(arg)
    if not path.is_file():
        raise InputError(f"metric {arg!r} is neither a declared metric nor a file")
    try:
        spec = json.loads(path.read_text())
        return path.stem, metric_from_spec(s.n, spec)
    except (json.JSONDecodeError, ValueError) as exc:
        raise InputError(f"{arg}: {exc}") from exc


# ---------------------------------------------------------------------------
# output


def _scalar(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def flatten(obj: Any, prefix: str = "") -> Iterable[tuple[str, str]]:
    if isinstance(obj, Mapping):
        for k, v in obj.items():
            yield from flatten(v, f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(obj, (list, tuple)):
        if not obj:
            yield prefix, ""
        for i, v in enumerate(obj):
            yield from flatten(v, f"{prefix}.{i}" if prefix else str(i))
    else:
        yield prefix, _scalar(obj)


def aligned(rows: Sequence[Sequence[str]], header: Sequence[str] | None = None) -> str:
    allrows = ([list(header)] if header else []) + [list(r) for r in rows]
    if not allrows:
        return ""
    widths = [max(len(r[i]) for r in allrows if i < len(r)) for i in range(max(len(r) for r in allrows))]
    lines = ["  ".join(c.ljust(widths[i]) for i, c in enumerate(r)).rstrip() for r in allrows]
    if header:
        lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


def grid_table(title: str, table: Sequence[Sequence[int]]) -> str:
    n = len(table) - 1
    rows = [[f"p={p}"] + [str(v) for v in table[p]] for p in range(n + 1)]
    return f"{title}\n" + aligned(rows, [""] + [f"q={q}" for q in range(n + 1)])


def emit_records(records: list[dict[str, Any]], fmt: str, columns: Sequence[str] | None = None) -> str:
    cols = list(columns) if columns else (list(records[0]) if records else [])
    if fmt == "json":
        return json.dumps(records, indent=2, ensure_ascii=False)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for r in records:
            w.writerow([_scalar(r.get(c)) for c in cols])
        return buf.getvalue().rstrip("\n")
    return aligned([[_scalar(r.get(c)) for c in cols] for r in records], cols)


def emit_tree(obj: Any, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(obj, indent=2, ensure_ascii=False)
    rows = [{"key": k, "value": v} for k, v in flatten(obj)]
    return emit_records(rows, fmt, ["key", "value"])


def _out(text: str) -> None:
    sys.stdout.write(text + ("\n" if text and not text.endswith("\n") else ""))


# ---------------------------------------------------------------------------
# commands


def cmd_validate(args) -> int:
    obj, _ = load_input(args.input)
    s = fibre(obj, args.t, args.at)
    rep = validate(s)
    _out(emit_tree({"name": s.name, **rep.as_dict()}, args.format))
    return 0 if rep.ok else 1


def _report_data(s: StructureEquations, entry, metric_arg: str | None) -> dict[str, Any]:
    prof = compute_profile(s)
    data = prof.as_dict()
    metrics: dict[str, Any] = {}
    if entry:
        for name, spec in entry.get("metrics", {}).items():
            metrics[name] = check_metric(s, metric_from_spec(s.n, spec)).as_dict()
    if metric_arg:
        name, omega = load_metric(metric_arg, s, entry)
        metrics[name] = check_metric(s, omega).as_dict()
    data["metrics"] = metrics
    return data


def cmd_report(args) -> int:
    obj, entry = load_input(args.input)
    s = fibre(obj, args.t, args.at)
    data = _report_data(s, entry, args.metric)
    if args.format != "table":
        _out(emit_tree(data, args.format))
        return 0
    sgg = data["sgg"]
    head = [
        ["name", data["name"]],
        ["n", str(data["n"])],
        ["betti", " ".join(map(str, data["betti"]))],
        ["h^{0,1}", str(data["hodge"][0][1])],
        ["h^{0,1}_BC", str(data["bc"][0][1])],
        ["b_1", str(data["betti"][1])],
        ["sgg", _scalar(sgg["sgg"]) if sgg else "n/a (not unimodular)"],
        ["degeneration_step", str(data["degeneration_step"])],
        ["unimodular", _scalar(data["unimodular"])],
        ["nilpotent", _scalar(data["nilpotent"])],
    ]
    parts = [aligned(head)]
    for key, title in (("hodge", "Dolbeault h^{p,q}"), ("bc", "Bott-Chern h^{p,q}_BC"), ("aeppli", "Aeppli h^{p,q}_A")):
        parts.append(grid_table(title, data[key]))
    last = data["degeneration_step"]
    for r, page in data["e_pages"].items():
        if int(r) <= last:
            parts.append(grid_table(f"Frolicher E_{r}" + (" = E_inf" if int(r) == last else ""), page))
    if data["map_ranks"]:
        parts.append("map ranks\n" + aligned([[k, str(v)] for k, v in data["map_ranks"].items()]))
    for name, flags in data["metrics"].items():
        parts.append(f"metric {name}\n" + aligned([[k, _scalar(v)] for k, v in flags.items()]))
    for c in data["caveats"]:
        parts.append(f"caveat: {c}")
    _out("\n\n".join(parts))
    return 0


def cmd_maps(args) -> int:
    obj, _ = load_input(args.input)
    s = fibre(obj, args.t, args.at)
    maps = {m.name: m.as_dict() for m in (map_T(s), map_S(s), map_Sstar(s), map_Tstar(s), map_F(s), map_P(s))}
    data = {"name": s.name, "maps": maps, "T_S_sequence": map_S_exactness(s), "Sstar_Tstar_sequence": map_Sstar_Tstar(s)}
    if args.format == "table":
        rows = [[k, str(v["source_dim"]), str(v["target_dim"]), str(v["rank"])] for k, v in maps.items()]
        text = aligned(rows, ["map", "source_dim", "target_dim", "rank"])
        for key in ("T_S_sequence", "Sstar_Tstar_sequence"):
            text += f"\n\n{key}\n" + aligned([[k, _scalar(v)] for k, v in data[key].items()])
        _out(text)
    else:
        _out(emit_tree(data, args.format))
    return 0


def cmd_check_metric(args) -> int:
    obj, entry = load_input(args.input)
    s = fibre(obj, args.t, args.at)
    name, omega = load_metric(args.metric, s, entry)
    flags = check_metric(s, omega)
    _out(emit_tree({"structure": s.name, "metric": name, "omega": str(omega), **flags.as_dict()}, args.format))
    return 0


def cmd_feasible(args) -> int:
    obj, _ = load_input(args.input)
    s = fibre(obj, args.t, args.at)
    kinds = KINDS if args.kind == "all" else (args.kind,)
    answers = [positive_feasibility(s, k, radius=args.radius, budget=args.budget).as_dict() for k in kinds]
    if args.format == "table":
        rows = [{"kind": a["kind"], "status": a["status"], "subspace_dim": a["subspace_dim"], "note": a.get("note", "")} for a in answers]
        _out(emit_records(rows, "table"))
    else:
        _out(emit_tree({"structure": s.name, "answers": answers}, args.format))
    return 0


def _sweep_points(obj: FamilySpec, args) -> list[dict[str, str]]:
    grid = parse_assignments(args.grid)
    if args.t is not None:
        grid["t"] = split_list(args.t)
    if not grid:
        raise InputError("sweep needs --t or --grid")
    unknown = set(grid) - set(obj.params)
    if unknown:
        raise InputError(f"unknown parameters {sorted(unknown)}; family has {list(obj.params)}")
    return grid_points(grid)


def cmd_sweep(args) -> int:
    obj, _ = load_input(args.input)
    if not isinstance(obj, FamilySpec):
        raise InputError("sweep needs a family")
    res = sweep(obj, _sweep_points(obj, args), jobs=args.jobs)
    if args.format == "json":
        _out(json.dumps(res.as_dict(), indent=2, ensure_ascii=False))
        return 0
    names = list(obj.params) if not res.rows else list(res.rows[0].params)
    records = []
    for r in res.rows:
        rec = dict(r.params)
        rec.update({k: v for k, v in r.as_dict().items() if k != "params"})
        records.append(rec)
    cols = names + ["sgg", "h11_bc", "h01", "b1", "on_jump_locus", "error"]
    text = emit_records(records, args.format, cols)
    if args.format == "table":
        sm = res.summary
        jumps = "; ".join(",".join(f"{k}={v}" for k, v in p.items()) for p in sm.get("jump_set", [])) or "none"
        line = f"summary: generic h11_bc={sm.get('generic_h11_bc', '')}, jump set {{{jumps}}}"
        if "jump_set_matches_locus" in sm:
            line += f", matches declared locus: {_scalar(sm['jump_set_matches_locus'])}"
        text += "\n" + line
    _out(text)
    return 0


def cmd_transport(args) -> int:
    obj, entry = load_input(args.input)
    if not isinstance(obj, FamilySpec):
        raise InputError("transport needs a family")
    base = family_instantiate(obj, obj.base_env())
    _, omega0 = load_metric(args.metric, base, entry)
    gamma0 = omega0
    if args.gamma:
        _, gamma0 = load_metric(args.gamma, base, entry)
    ts = [gr(x) for x in split_list(args.t or "1/10,-1/10,i/10")]
    rep = transport_gauduchon(obj, gamma0, omega0, ts)
    data = rep.as_dict()
    if args.format == "table":
        rows = [{"t": r["t"], "pd": r["pd"], "gauduchon": r["gauduchon"], "matrix": json.dumps(r.get("matrix"))} for r in data["rows"]]
        text = aligned(
            [["family", data["family"]], ["base_sgg", _scalar(data["base_sgg"])], ["class_sg", _scalar(data["class_sg"])], ["d_closed", _scalar(data["d_closed"])]]
        )
        text += "\n\n" + emit_records(rows, "table")
        for note in data["notes"]:
            text += f"\nnote: {note}"
        _out(text)
    else:
        _out(emit_tree(data, args.format))
    return 0


def _load_corpus_file(path: str) -> list[dict[str, Any]]:
    try:
        entries = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"{path}: {exc}") from exc
    if not isinstance(entries, list):
        raise InputError(f"{path}: expected a JSON list of corpus entries")
    return entries


def cmd_examples(args) -> int:
    entries = _load_corpus_file(args.corpus) if args.corpus else CORPUS
    if args.only:
        entries = [e for e in entries if e["name"] in set(args.only)]
    if args.action == "list":
        records = [
            {
                "name": e["name"],
                "kind": "family" if is_family_doc(e["doc"]) else "structure",
                "expectations": len(e.get("expected", [])),
                "provenance": e.get("provenance", ""),
                "notes": e.get("notes", ""),
            }
            for e in entries
        ]
        _out(emit_records(records, args.format))
        return 0
    ok, results = run_all(entries)
    records = [r.as_dict() for r in results]
    for r in records:
        for k in ("expected", "observed"):
            if isinstance(r[k], dict):
                r[k] = json.dumps(r[k], sort_keys=True)
    if args.format == "json":
        _out(json.dumps({"ok": ok, "results": records}, indent=2, ensure_ascii=False))
    else:
        cols = ["entry", "key", "at", "tag", "expected", "observed", "passed", "error"]
        shown = records if args.verbose or args.format == "csv" else [r for r in records if not r["passed"]]
        text = emit_records(shown, args.format, cols) if shown else ""
        if args.format == "table":
            npass = sum(r["passed"] for r in records)
            paper = [r for r in records if r["tag"] == "PAPER"]
            summary = (
                f"run-all: {npass}/{len(records)} checks passed; "
                f"PAPER {sum(r['passed'] for r in paper)}/{len(paper)}; {'PASS' if ok else 'FAIL'}"
            )
            text = (text + "\n" if text else "") + summary
        _out(text)
    return 0 if ok else 2


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="nilcohom", description="Exact cohomology of invariant complex structures on nilmanifolds.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, fibres: bool = True) -> None:
        p.add_argument("input", help="corpus name or structure/family JSON file")
        p.add_argument("--format", choices=FORMATS, default="table")
        if fibres:
            p.add_argument("--t", help="family parameter t (exact value)")
            p.add_argument("--at", action="append", help="family parameter name=value (repeatable)")

    p = sub.add_parser("validate", help="check d^2 = 0, integrability, unimodularity and nilpotency")
    common(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("report", help="full cohomological profile and metric flags")
    common(p)
    p.add_argument("--metric", help="metric JSON file, a declared metric name, or 'standard'")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("maps", help="canonical maps T, S, S*, T*, F, P with ranks")
    common(p)
    p.set_defaults(func=cmd_maps)

    p = sub.add_parser("check-metric", help="positivity, Gauduchon, sG, superstrong and balanced flags")
    common(p)
    p.add_argument("--metric", default="standard", help="metric JSON file, a declared metric name, or 'standard'")
    p.set_defaults(func=cmd_check_metric)

    p = sub.add_parser("feasible", help="search for a metric of a given kind or a separating certificate")
    common(p)
    p.add_argument("--kind", choices=KINDS + ("all",), default="all")
    p.add_argument("--radius", type=int, default=3)
    p.add_argument("--budget", type=int, default=20000)
    p.set_defaults(func=cmd_feasible)

    p = sub.add_parser("sweep", help="evaluate a family over exact parameter values")
    common(p, fibres=False)
    p.add_argument("--t", help="comma-separated exact values of t")
    p.add_argument("--grid", action="append", help="name=v1,v2,... (repeatable; cartesian product)")
    p.add_argument("--jobs", type=int, default=min(4, os.cpu_count() or 1))
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("transport", help="carry a Gauduchon class along a family")
    common(p, fibres=False)
    p.add_argument("--t", help="comma-separated exact values of t (default 1/10,-1/10,i/10)")
    p.add_argument("--metric", help="base metric omega_0 (default standard)")
    p.add_argument("--gamma", help="base Gauduchon metric whose class is carried (default omega_0)")
    p.set_defaults(func=cmd_transport)

    p = sub.add_parser("examples", help="list the built-in corpus or check every expectation")
    p.add_argument("action", choices=("list", "run-all"))
    p.add_argument("--format", choices=FORMATS, default="table")
    p.add_argument("--corpus", help="JSON list of corpus entries to use instead of the built-in one")
    p.add_argument("--only", action="append", help="restrict to an entry name (repeatable)")
    p.add_argument("--verbose", action="store_true", help="show passing checks too")
    p.set_defaults(func=cmd_examples)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except StructureError as exc:
        print(f"error: {exc}", file=sys.stderr)
        for v in getattr(exc, "violations", []):
            print(f"  {v}", file=sys.stderr)
        return 1
    except (InputError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
