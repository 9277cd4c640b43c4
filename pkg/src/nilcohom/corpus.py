"""Built-in example corpus with provenance, tagged expectations and their evaluation.

Every expectation carries a tag: ``PAPER`` (quoted from the source text),
``TRIVIAL`` (immediate) or ``DERIVED`` (computed by an independent route).
``run_all`` fails only on ``PAPER`` expectations; the others are reported.
"""

from __future__ import annotations

import itertools
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence

from .coeffexpr import evaluate, parse_coeff_expr
from .cohomology import CohomologyProfile, bc_number, betti, compute_profile, hodge_number, sgg_verdict
from .exactfield import Matrix, format_scalar, gr
from .exterior import Form, form_of_hermitian_11
from .metrics import check_metric, ddbar_vanishing, positive_feasibility
from .structure import (
    FamilySpec,
    StructureEquations,
    StructureError,
    family_derived,
    family_from_dict,
    family_instantiate,
    is_family_doc,
    on_locus,
    structure_from_dict,
    validate,
)

BC_JUMP = "(1-t*conj(t))/((1-t)*(1-conj(t)))"


def _e(key: str, value: Any, tag: str, source: str = "", **extra) -> dict[str, Any]:
    out = {"key": key, "value": value, "tag": tag}
    if source:
        out["source"] = source
    out.update(extra)
    return out


def _derivative(mono: str, terms: Mapping[str, str], t: str) -> dict[str, Any]:
    return _e(
        "d_monomial",
        dict(terms),
        "PAPER",
        "Prop 6.1 derivative display",
        monomial=mono,
        at={"t": t},
    )


_PROP61_DERIVATIVES = {
    "1|3": {"12|1": "1", "12|2": f"-2*{BC_JUMP}", "1|12": "-1"},
    "2|3": {"12|1": "-1", "2|12": "-1"},
    "3|1": {"12|1": "1", "1|12": "-1", "2|12": f"2*{BC_JUMP}"},
    "3|2": {"12|2": "1", "1|12": "1"},
    "3|3": {
        "12|3": "1",
        "13|1": "-1",
        "23|1": "-1",
        "23|2": f"2*{BC_JUMP}",
        "1|13": "1",
        "1|23": "1",
        "2|23": f"-2*{BC_JUMP}",
        "3|12": "-1",
    },
}

CORPUS: list[dict[str, Any]] = [
    {
        "name": "torus3",
        "doc": {"n": 3, "name": "torus3", "d": {}},
        "provenance": "complex 3-torus: all differentials vanish",
        "notes": "abelian Lie algebra; invariant and manifold cohomology agree",
        "metrics": {"standard": {"diag": ["1", "1", "1"]}},
        "expected": [
            _e("betti.1", 6, "TRIVIAL"),
            _e("hodge.0.1", 3, "TRIVIAL"),
            _e("bc.1.1", 9, "TRIVIAL"),
            _e("aeppli.1.1", 9, "TRIVIAL"),
            _e("degeneration_step", 1, "TRIVIAL"),
            _e("sgg", True, "TRIVIAL"),
            _e("metric.standard.balanced", True, "TRIVIAL"),
        ],
    },
    {
        "name": "iwasawa",
        "doc": {"n": 3, "name": "iwasawa", "d": {"3": {"12": "1"}}},
        "provenance": "Iwasawa manifold, complex parallelisable: \"dη³=η^{12}\"; Cor 1.4 \"h^{0,1}_{BC} = h^{0,1}_{∂̄} = 2\"",
        "notes": "nilmanifold; invariant cohomology computes manifold cohomology (cited)",
        "metrics": {"standard": {"diag": ["1", "1", "1"]}},
        "expected": [
            _e("hodge.0.1", 2, "PAPER", "h^{0,1}_{BC} = h^{0,1}_{∂̄} = 2"),
            _e("bc.0.1", 2, "PAPER", "h^{0,1}_{BC} = h^{0,1}_{∂̄} = 2"),
            _e("betti.1", 4, "PAPER", "(0^4,13+42,14+23), b_1 = k = 4"),
            _e("sgg", True, "PAPER", "Cor 1.4: are sGG manifolds"),
            _e("aeppli.2.2", 4, "DERIVED", "duality with h^{1,1}_BC"),
            _e("metric.standard.gauduchon", True, "DERIVED"),
            _e("metric.standard.balanced", True, "DERIVED", "exact expansion: d(ω²) = 0"),
        ],
    },
    {
        "name": "prop52",
        "doc": {"n": 3, "name": "prop52", "d": {"3": {"1~1": "1", "2~2": "-1"}}},
        "provenance": "Prop 5.2: \"dη³=η^{11̄}−η^{22̄}\" on (0^5,12+34); \"the first Betti number of N is 5\"",
        "notes": "balanced, E_1-degenerate, not sGG",
        "metrics": {"half": {"diag": ["1/2", "1/2", "1/2"]}},
        "expected": [
            _e("betti.1", 5, "PAPER", "first Betti number of N is 5"),
            _e("sgg", False, "PAPER", "X=(N,J) is not sGG because b_1(N)=5"),
            _e("degeneration_step", 1, "PAPER", "E_1(X) ≅ E_∞(X)"),
            _e("metric.half.balanced", True, "PAPER", "satisfies dω²=0, that is, ω is a balanced metric"),
            _e("metric.half.positive", True, "PAPER", "ω = i/2(η^{11̄}+η^{22̄}+η^{33̄})"),
            _e("feasible.balanced", "witness", "PAPER", "ω is a balanced metric on X"),
            _e("hodge.0.1", 3, "DERIVED", "exact kernel of ∂̄ on (0,1)"),
        ],
    },
    {
        "name": "example1",
        "doc": {"n": 3, "name": "example1", "d": {"3": {"12": "1", "1~1": "1"}}},
        "provenance": "Prop 5.3, eq. (example1): \"dη³=η^{12}+η^{11̄}\" on the Iwasawa algebra",
        "notes": "sGG, not balanced, Frölicher degenerates at E_2; no superstrong Gauduchon metric (Prop 5.4)",
        "metrics": {"standard": {"diag": ["1", "1", "1"]}},
        "expected": [
            _e("sgg", True, "PAPER", "sGG because the complex structure J is not abelian"),
            _e("degeneration_step", 2, "PAPER", "E_1(X) ≇ E_2(X) ≅ E_∞(X)"),
            _e("ddbar_vanishing.2.1", True, "PAPER", "∂∂̄ Λ^{2,1}(g*) ≡ 0"),
            _e("feasible.balanced", "witness", "PAPER", "X does not admit any balanced metric", op="ne"),
            _e("feasible.supersG", "witness", "PAPER", "X is sGG but does not admit any superstrong Gauduchon metric", op="ne"),
            _e("feasible.balanced", "infeasible", "DERIVED", "separation certificate"),
        ],
    },
    {
        "name": "example22",
        "doc": {"n": 3, "name": "example22", "d": {"3": {"12": "1", "1~1": "1", "1~2": "1", "2~2": "-2"}}},
        "provenance": "Prop 6.1, eq. (example22): \"dη³=η^{12}+η^{11̄}+η^{12̄}−2η^{22̄}\"",
        "notes": "central fibre of the prop61 family",
        "metrics": {"standard": {"diag": ["1", "1", "1"]}},
        "expected": [
            _e("bc.1.1", 5, "PAPER", "therefore h^{1,1}_{BC}(X_0)=5"),
            _e("sgg", True, "PAPER", "X_0 is sGG"),
            _e("aeppli.2.2", 5, "DERIVED", "duality with h^{1,1}_BC = 5"),
        ],
    },
    {
        "name": "prop61",
        "doc": {
            "n": 3,
            "name": "prop61",
            "params": ["t"],
            "frame": {"2": {"2": "(1-conj(t))/(1-t*conj(t))", "~2": "(1-conj(t))*t/(1-t*conj(t))"}},
            "d": {"3": {"12": "1", "1~1": "1", "1~2": "1", "2~2": f"-2*{BC_JUMP}"}},
            "locus": "t*conj(t)+(1-t)*(1-conj(t))-1",
            "domain": "|t| < 1",
        },
        "provenance": "Prop 6.1, eq. (example22bis): \"ν²_t=(1−t̄)/(1−|t|²)(η²+tη^{2̄})\", jump curve \"C = {|t|²+|1−t|²=1}\"",
        "notes": "h^{1,1}_BC jumps up on the circle C centred at 1/2 through 0",
        "expected": [
            _e("bc.1.1", 5, "PAPER", "h^{1,1}_{BC}(X_0)=5", at={"t": "0"}),
            _e("bc.1.1", 4, "PAPER", "h^{1,1}_{BC}(X_t)=4 for all t ∈ Δ*∖C", at={"t": "1/4"}),
            _e("bc.1.1", 4, "PAPER", "h^{1,1}_{BC}(X_t)=4 for all t ∈ Δ*∖C", at={"t": "i/4"}),
            _e("bc.1.1", 4, "PAPER", "h^{1,1}_{BC}(X_t)=4 for all t ∈ Δ*∖C", at={"t": "-1/4"}),
            _e("bc.1.1", 5, "PAPER", "such a form exists if and only if 1−|t|²=|1−t|²", at={"t": "(1+i)/2"}),
            _e("on_locus", True, "PAPER", "C passes through t=0", at={"t": "0"}),
            _e("sgg", True, "PAPER", "X_t is sGG", at={"t": "1/4"}),
            _e("frame_consistent", True, "DERIVED", "structure derived from the frame", at={"t": "1/4"}),
            _e("frame_consistent", True, "DERIVED", "structure derived from the frame", at={"t": "(1+i)/2"}),
        ]
        + [_derivative(m, terms, t) for m, terms in _PROP61_DERIVATIVES.items() for t in ("0", "1/4", "(1+i)/2")],
    },
    {
        "name": "prop62",
        "doc": {
            "n": 3,
            "name": "prop62",
            "params": ["t"],
            "frame": {"2": {"2": "1", "~2": "t"}},
            "d": {"3": {"12": "-conj(t)/(1-t*conj(t))", "1~1": "1", "1~2": "1/(1-t*conj(t))"}},
            "domain": "|t| < 1",
        },
        "provenance": "Prop 6.2 first example: \"τ²_t=η²+tη^{2̄}\", \"dτ³_t=−t̄/(1−|t|²)τ^{12}+τ^{11̄}+1/(1−|t|²)τ^{12̄}\"",
        "notes": "abelian (not sGG) central fibre, sGG for t ≠ 0",
        "expected": [
            _e("sgg", False, "PAPER", "X_0 is not sGG", at={"t": "0"}),
            _e("sgg", True, "PAPER", "X_t=(N,J_t) is sGG for any t≠0", at={"t": "1/2"}),
            _e("sgg", True, "PAPER", "X_t=(N,J_t) is sGG for any t≠0", at={"t": "i/3"}),
            _e("hodge.0.1", 3, "PAPER", "H^{0,1} = ⟨[η^{1̄}],[η^{2̄}],[η^{3̄}]⟩", at={"t": "0"}),
            _e("d_coefficient", "-2/3", "DERIVED", "−(1/2)/(3/4)", at={"t": "1/2"}, generator=3, monomial="12|"),
            _e("frame_consistent", True, "DERIVED", "structure derived from the frame", at={"t": "1/2"}),
        ],
    },
    {
        "name": "eq14",
        "doc": {
            "n": 3,
            "name": "eq14",
            "params": ["rho", "lam", "D"],
            "d": {"3": {"12": "rho", "1~1": "1", "1~2": "lam", "2~2": "D"}},
        },
        "provenance": "Thm 5.1, eq. (14): \"dη³=ρη^{12}+η^{11̄}+λη^{12̄}+Dη^{22̄}\", sGG \"if and only if ρ=1\"",
        "notes": "parameters sampled at Gaussian-rational values only",
        "expected": [
            _e("sgg", rho == 1, "PAPER", "if and only if ρ=1", at={"rho": str(rho), "lam": lam, "D": D})
            for rho in (0, 1)
            for lam in ("0", "1", "2")
            for D in ("0", "1", "i", "-2", "(1+i)/2")
        ]
        + [
            _e("hodge.0.1", 3, "PAPER", "⟨[η^{1̄}],[η^{2̄}],[η^{3̄}]⟩ when ρ=0", at={"rho": "0", "lam": "1", "D": "i"}),
            _e("hodge.0.1", 2, "PAPER", "b_1 = 4 = 2h^{0,1} iff ρ=1", at={"rho": "1", "lam": "1", "D": "i"}),
        ],
    },
    {
        "name": "nakamura",
        "doc": {"n": 3, "name": "nakamura", "d": {"1": {"13": "2*i", "3~3": "1"}, "2": {"23": "-2*i"}}},
        "provenance": "Prop 6.3: \"dη¹=2iη^{13}+η^{33̄}, dη²=−2iη^{23}, dη³=0\" (solvmanifold central limit)",
        "notes": (
            "solvable, not nilpotent: invariant values only. The manifold-level h^{0,1}=3 quoted in the text "
            "(\"b₁(X₀)=2<6=2h^{0,1}_{∂̄}(X₀)\") differs from the invariant h^{0,1}=1; no correction is attempted"
        ),
        "expected": [
            _e("valid", True, "PAPER", "complex structure equations of J_0"),
            _e("ddbar_vanishing.2.1", True, "PAPER", "easy to check that ∂∂̄ Λ^{2,1}(g*) ≡ 0"),
            _e("betti.1", 2, "PAPER", "b₁(X₀)=2"),
            _e("caveat", True, "TRIVIAL", "solvmanifold caveat emitted"),
            _e("hodge.0.1", 1, "DERIVED", "invariant value; the manifold value is 3"),
            _e("feasible.supersG", "witness", "PAPER", "X_0 is not superstrong Gauduchon", op="ne"),
        ],
    },
    {
        "name": "uv14_plus",
        "doc": {"n": 3, "name": "uv14_plus", "d": {"2": {"13": "1", "1~3": "1"}, "3": {"1~1": "i", "1~2": "i", "2~1": "-i"}}},
        "provenance": "Thm 5.1 proof, (0^2,12,13,23,14+25): \"dη²=η^{13}+η^{13̄}, dη³=iη^{11̄}±i(η^{12̄}−η^{21̄})\", sign +",
        "notes": "b_1 = 2 < 4 = 2h^{0,1}",
        "expected": [
            _e("betti.1", 2, "PAPER", "b_1(N)=2<4=2h^{0,1}"),
            _e("hodge.0.1", 2, "PAPER", "H^{0,1} = ⟨[η^{1̄}],[η^{3̄}]⟩"),
            _e("sgg", False, "PAPER", "no invariant complex structure on N satisfying the sGG property"),
        ],
    },
    {
        "name": "uv14_minus",
        "doc": {"n": 3, "name": "uv14_minus", "d": {"2": {"13": "1", "1~3": "1"}, "3": {"1~1": "i", "1~2": "-i", "2~1": "i"}}},
        "provenance": "Thm 5.1 proof, (0^2,12,13,23,14+25): \"dη³=iη^{11̄}±i(η^{12̄}−η^{21̄})\", sign −",
        "notes": "b_1 = 2 < 4 = 2h^{0,1}",
        "expected": [
            _e("betti.1", 2, "PAPER", "b_1(N)=2<4=2h^{0,1}"),
            _e("hodge.0.1", 2, "PAPER", "H^{0,1} = ⟨[η^{1̄}],[η^{3̄}]⟩"),
            _e("sgg", False, "PAPER", "no invariant complex structure on N satisfying the sGG property"),
        ],
    },
    {
        "name": "h14_25",
        "doc": {"n": 3, "name": "h14_25", "d": {"2": {"1~1": "1"}, "3": {"1~2": "1", "2~1": "1"}}},
        "provenance": "Thm 5.1 proof, (0^4,12,14+25): \"dη²=η^{11̄}, dη³=η^{12̄}+η^{21̄}\"",
        "notes": "b_1 = 4 < 6 = 2h^{0,1}",
        "expected": [
            _e("hodge.0.1", 3, "PAPER", "h^{0,1}_{∂̄}(N,J)=3"),
            _e("betti.1", 4, "PAPER", "b_1(N)=4<6"),
            _e("sgg", False, "PAPER", "no invariant complex structure on N satisfying the sGG property"),
        ],
    },
]


# ---------------------------------------------------------------------------
# lookups


def corpus_names() -> list[str]:
    return [e["name"] for e in CORPUS]


def get_entry(name: str) -> dict[str, Any]:
    for e in CORPUS:
        if e["name"] == name:
            return e
    raise KeyError(name)


def load_entry_object(entry: Mapping[str, Any]) -> StructureEquations | FamilySpec:
    doc = entry["doc"]
    if is_family_doc(doc):
        return family_from_dict(doc)
    return structure_from_dict(doc)


def metric_from_spec(n: int, spec: Mapping[str, Any]) -> Form:
    """Metric from ``{"diag": [...]}`` or ``{"h": [[...], ...]}`` (Hermitian matrix H, ω = i Σ H η^{j k̄})."""
    if "diag" in spec:
        vals = [gr(str(x)) for x in spec["diag"]]
        H = Matrix.diag(vals)
    elif "h" in spec:
        H = Matrix([[gr(str(x)) for x in row] for row in spec["h"]], n)
    else:
        raise ValueError("metric needs 'diag' or 'h'")
    if H.nrows != n:
        raise ValueError(f"metric must be {n}x{n}")
    return form_of_hermitian_11(n, H)


_MONO = re.compile(r"^(\d*)\|(\d*)$")


def parse_monomial(text: str) -> tuple[tuple[int, ...], tuple[int, ...]]:
    m = _MONO.match(text.strip())
    if not m:
        raise ValueError(f"bad monomial {text!r}; expected 'holo|anti' such as '12|3'")
    return tuple(int(c) for c in m.group(1)), tuple(int(c) for c in m.group(2))


def _env_from_at(f: FamilySpec, at: Mapping[str, Any]) -> dict:
    return {k: gr(str(v)) for k, v in at.items()}


# ---------------------------------------------------------------------------
# expectation evaluation


@dataclass
class _Context:
    entry: Mapping[str, Any]
    obj: StructureEquations | FamilySpec
    cache: dict = field(default_factory=dict)

    def structure(self, at) -> StructureEquations:
        key = ("s", tuple(sorted((at or {}).items())))
        if key not in self.cache:
            if isinstance(self.obj, FamilySpec):
                self.cache[key] = family_instantiate(self.obj, _env_from_at(self.obj, at or self.obj.base_env()))
            else:
                self.cache[key] = self.obj
        return self.cache[key]

    def profile(self, at) -> CohomologyProfile:
        key = ("p", tuple(sorted((at or {}).items())))
        if key not in self.cache:
            self.cache[key] = compute_profile(self.structure(at))
        return self.cache[key]


def observe(ctx: _Context, exp: Mapping[str, Any]) -> Any:
    key = exp["key"]
    at = exp.get("at")
    parts = key.split(".")
    head = parts[0]
    if head == "valid":
        return validate(ctx.structure(at)).ok
    if head in ("betti", "hodge", "bc", "aeppli"):
        pr = ctx.profile(at)
        table = getattr(pr, head)
        idx = [int(x) for x in parts[1:]]
        return table[idx[0]] if head == "betti" else table[idx[0]][idx[1]]
    if head == "degeneration_step":
        return ctx.profile(at).degeneration_step
    if head == "sgg":
        return sgg_verdict(ctx.structure(at)).sgg
    if head == "caveat":
        return bool(ctx.profile(at).caveats)
    if head == "ddbar_vanishing":
        return ddbar_vanishing(ctx.structure(at), int(parts[1]), int(parts[2]))
    if head == "metric":
        s = ctx.structure(at)
        omega = metric_from_spec(s.n, ctx.entry["metrics"][parts[1]])
        return getattr(check_metric(s, omega), parts[2])
    if head == "feasible":
        return positive_feasibility(ctx.structure(at), parts[1]).status
    if head == "on_locus":
        return on_locus(ctx.obj, _env_from_at(ctx.obj, at))
    if head == "frame_consistent":
        return family_derived(ctx.obj, _env_from_at(ctx.obj, at)) == ctx.structure(at)
    if head == "d_coefficient":
        s = ctx.structure(at)
        return format_scalar(s.d1[exp["generator"] - 1].coefficient(*parse_monomial(exp["monomial"])))
    if head == "d_monomial":
        s = ctx.structure(at)
        holo, anti = parse_monomial(exp["monomial"])
        got = s.d(Form.monomial(s.n, holo, anti))
        return {f"{''.join(map(str, m[0]))}|{''.join(map(str, m[1]))}": format_scalar(c) for m, c in sorted(got.terms.items())}
    raise KeyError(f"unknown expectation key {key!r}")


def expected_value(ctx: _Context, exp: Mapping[str, Any]) -> Any:
    v = exp["value"]
    if exp["key"] == "d_monomial":
        env = _env_from_at(ctx.obj, exp.get("at") or {})
        out = {}
        for mono, text in v.items():
            c = evaluate(parse_coeff_expr(text, None), env)
            if not c.is_zero():
                h, a = parse_monomial(mono)
                out[f"{''.join(map(str, h))}|{''.join(map(str, a))}"] = format_scalar(c)
        return dict(sorted(out.items()))
    return v


@dataclass(frozen=True)
class CheckResult:
    entry: str
    key: str
    at: str
    tag: str
    expected: Any
    observed: Any
    passed: bool
    source: str = ""
    error: str = ""

    def as_dict(self) -> dict[str, Any]:
        return {
            "entry": self.entry,
            "key": self.key,
            "at": self.at,
            "tag": self.tag,
            "expected": self.expected,
            "observed": self.observed,
            "passed": self.passed,
            "source": self.source,
            "error": self.error,
        }


def _at_label(at) -> str:
    if not at:
        return ""
    return ",".join(f"{k}={v}" for k, v in at.items())


def check_entry(entry: Mapping[str, Any]) -> list[CheckResult]:
    try:
        obj = load_entry_object(entry)
    except (StructureError, ValueError) as exc:
        return [CheckResult(entry["name"], "load", "", "PAPER", True, False, False, "", str(exc))]
    ctx = _Context(entry, obj)
    results = []
    for exp in entry.get("expected", []):
        label = exp["key"] + (f"[{exp['monomial']}]" if "monomial" in exp else "")
        at = _at_label(exp.get("at"))
        try:
            want = expected_value(ctx, exp)
            got = observe(ctx, exp)
            ok = (got != want) if exp.get("op") == "ne" else (got == want)
            shown = f"!= {want}" if exp.get("op") == "ne" else want
            results.append(CheckResult(entry["name"], label, at, exp["tag"], shown, got, ok, exp.get("source", "")))
        except Exception as exc:  # recorded per check, the run continues
            results.append(CheckResult(entry["name"], label, at, exp["tag"], exp["value"], None, False, exp.get("source", ""), f"{type(exc).__name__}: {exc}"))
    return results


def run_all(entries: Sequence[Mapping[str, Any]] | None = None) -> tuple[bool, list[CheckResult]]:
    """Evaluate every expectation; the run fails iff a PAPER-tagged check fails."""
    results: list[CheckResult] = []
    for entry in entries if entries is not None else CORPUS:
        results.extend(check_entry(entry))
    ok = all(r.passed for r in results if r.tag == "PAPER")
    return ok, results


# ---------------------------------------------------------------------------
# sweeps


@dataclass(frozen=True)
class SweepRow:
    params: dict[str, str]
    sgg: bool | None
    h11_bc: int | None
    h01: int | None
    b1: int | None
    on_jump_locus: bool | None
    error: str = ""

    def as_dict(self) -> dict[str, Any]:
        return {
            "params": dict(self.params),
            "sgg": self.sgg,
            "h11_bc": self.h11_bc,
            "h01": self.h01,
            "b1": self.b1,
            "on_jump_locus": self.on_jump_locus,
            "error": self.error,
        }


@dataclass(frozen=True)
class SweepResult:
    family: str
    rows: list[SweepRow]
    summary: dict[str, Any]

    def as_dict(self) -> dict[str, Any]:
        return {"family": self.family, "rows": [r.as_dict() for r in self.rows], "summary": dict(self.summary)}


def _sweep_row(f: FamilySpec, pt: Mapping[str, Any]) -> SweepRow:
    shown = {k: str(v) for k, v in pt.items()}
    try:
        env = {k: gr(str(v)) for k, v in pt.items()}
        shown = {k: format_scalar(v) for k, v in env.items()}
        s = family_instantiate(f, env)
        return SweepRow(shown, sgg_verdict(s).sgg, bc_number(s, 1, 1), hodge_number(s, 0, 1), betti(s, 1), on_locus(f, env))
    except (ValueError, ArithmeticError) as exc:
        return SweepRow(shown, None, None, None, None, None, str(exc))


def sweep(f: FamilySpec, points: Sequence[Mapping[str, Any]], jobs: int = 1) -> SweepResult:
    """One row per point, in input order; rows run in worker processes when ``jobs > 1``."""
    if jobs > 1 and len(points) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_sweep_row, [f] * len(points), points))
    else:
        rows = [_sweep_row(f, pt) for pt in points]
    good = [r for r in rows if r.h11_bc is not None]
    summary: dict[str, Any] = {"points": len(rows), "failed": len(rows) - len(good)}
    if good:
        base = min(r.h11_bc for r in good)
        jumps = [r.params for r in good if r.h11_bc > base]
        summary["generic_h11_bc"] = base
        summary["jump_set"] = jumps
        if f.locus is not None:
            on = [r.params for r in good if r.on_jump_locus]
            summary["declared_locus_points"] = on
            summary["jump_set_matches_locus"] = jumps == on
    return SweepResult(f.name, rows, summary)


def grid_points(spec: Mapping[str, Sequence[str]]) -> list[dict[str, str]]:
    names = list(spec)
    return [dict(zip(names, combo)) for combo in itertools.product(*(spec[k] for k in names))]


__all__ = [
    "CORPUS",
    "CheckResult",
    "SweepResult",
    "SweepRow",
    "check_entry",
    "corpus_names",
    "get_entry",
    "grid_points",
    "load_entry_object",
    "metric_from_spec",
    "parse_monomial",
    "run_all",
    "sweep",
]
