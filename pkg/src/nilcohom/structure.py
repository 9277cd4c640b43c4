"""Complex structure equations, their differentials and deformation families.

A structure is given by ``d eta^k`` for a (1,0)-coframe; only (2,0) and (1,1)
parts are accepted, which hard-codes integrability.  ``d`` is extended to
conjugates by ``d conj(eta^k) := conj(d eta^k)`` and to the whole algebra by
the graded Leibniz rule.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping, Sequence

from .coeffexpr import CoeffExpr, EvaluationError, evaluate, parse_coeff_expr, render
from .exactfield import (
    ONE,
    ZERO,
    GaussianRational,
    Matrix,
    format_scalar,
    gr,
    inverse,
    mat_kernel,
    mat_rank,
    vstack,
)
from .exterior import BidegreeError, Form, Monomial, basis, total_basis

OPS = ("del", "delbar", "d")
_OP_ALIASES = {"∂": "del", "partial": "del", "∂̄": "delbar", "dbar": "delbar", "d": "d", "del": "del", "delbar": "delbar"}


class StructureError(ValueError):
    """Invalid structure equations; ``violations`` lists every failed check."""

    def __init__(self, msg: str, violations: Sequence[str] = ()):
        super().__init__(msg if not violations else f"{msg}: " + "; ".join(violations))
        self.violations = list(violations)


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: tuple[str, ...]
    unimodular: bool
    nilpotent: bool

    def as_dict(self) -> dict[str, Any]:
        return {
            "ok": self.ok,
            "violations": list(self.violations),
            "unimodular": self.unimodular,
            "nilpotent": self.nilpotent,
        }


@dataclass(frozen=True, eq=False)
class StructureEquations:
    n: int
    name: str
    d1: tuple[Form, ...]
    meta: Mapping[str, Any] = field(default_factory=dict)
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if len(self.d1) != self.n:
            raise StructureError(f"expected {self.n} differentials, got {len(self.d1)}")

    def __eq__(self, other):
        if not isinstance(other, StructureEquations):
            return NotImplemented
        return self.n == other.n and self.d1 == other.d1

    def __hash__(self):
        return hash((self.n, self.d1))

    # -- differential ------------------------------------------------
    def d_generator(self, label: int) -> Form:
        """d of generator ``label`` in 0..2n-1; labels >= n are the conjugates."""
        n = self.n
        if label < n:
            return self.d1[label]
        key = ("dbar_gen", label)
        if key not in self._cache:
            self._cache[key] = self.d1[label - n].conjugate()
        return self._cache[key]

    def d_monomial(self, m: Monomial) -> Form:
        key = ("dmono", m)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        n = self.n
        holo, anti = m
        labels = [j - 1 for j in holo] + [n + j - 1 for j in anti]
        gens = [Form.eta(n, x + 1) if x < n else Form.eta_bar(n, x - n + 1) for x in labels]
        out = Form.zero(n)
        for pos, lab in enumerate(labels):
            term = Form.scalar(n, -1 if pos % 2 else 1)
            for g in gens[:pos]:
                term = term.wedge(g)
            term = term.wedge(self.d_generator(lab))
            for g in gens[pos + 1 :]:
                term = term.wedge(g)
            out = out + term
        self._cache[key] = out
        return out

    def d(self, a: Form) -> Form:
        out = Form.zero(self.n)
        for m, c in a.terms.items():
            out = out + self.d_monomial(m).scale(c)
        return out

    def del_(self, a: Form) -> Form:
        """The (1,0)-part of d on each homogeneous piece."""
        out = Form.zero(self.n)
        for m, c in a.terms.items():
            out = out + self.d_monomial(m).component(len(m[0]) + 1, len(m[1])).scale(c)
        return out

    def delbar(self, a: Form) -> Form:
        out = Form.zero(self.n)
        for m, c in a.terms.items():
            out = out + self.d_monomial(m).component(len(m[0]), len(m[1]) + 1).scale(c)
        return out

    def apply(self, op: str, a: Form) -> Form:
        op = _OP_ALIASES[op]
        return {"del": self.del_, "delbar": self.delbar, "d": self.d}[op](a)

    # -- matrices ------------------------------------------------------
    def matrix(self, op: str, p: int, q: int) -> Matrix:
        return operator_matrix(self, op, p, q)

    def total_d(self, k: int) -> Matrix:
        return total_d_matrix(self, k)


def _target(op: str, p: int, q: int) -> tuple[int, int]:
    return (p + 1, q) if op == "del" else (p, q + 1)


def _coords(form: Form, n: int, p: int, q: int) -> tuple:
    if p > n or q > n or p < 0 or q < 0:
        return ()
    return form.component(p, q).to_vector(p, q)


def operator_matrix(s: StructureEquations, op: str, p: int, q: int) -> Matrix:
    """Matrix of del / delbar / d from Lambda^{p,q} in the canonical bases.

    For ``d`` the target is ``Lambda^{p+1,q} (+) Lambda^{p,q+1}`` stacked in
    that order.  Out-of-range bidegrees give empty matrices.
    """
    op = _OP_ALIASES[op]
    n = s.n
    key = ("opmat", op, p, q)
    if key in s._cache:
        return s._cache[key]
    src = basis(n, p, q) if 0 <= p <= n and 0 <= q <= n else ()
    if op == "d":
        M = vstack(operator_matrix(s, "del", p, q), operator_matrix(s, "delbar", p, q))
    else:
        tp, tq = _target(op, p, q)
        tdim = len(basis(n, tp, tq)) if 0 <= tp <= n and 0 <= tq <= n else 0
        cols = []
        for m in src:
            dm = s.d_monomial(m)
            cols.append(_coords(dm, n, tp, tq) if tdim else ())
        M = Matrix.from_columns(cols, tdim) if cols else Matrix([[] for _ in range(tdim)], 0)
    s._cache[key] = M
    return M


def total_d_matrix(s: StructureEquations, k: int) -> Matrix:
    """d : Lambda^k -> Lambda^{k+1} in :func:`total_basis` order."""
    key = ("totald", k)
    if key in s._cache:
        return s._cache[key]
    n = s.n
    src = total_basis(n, k) if 0 <= k <= 2 * n else ()
    tgt_dim = len(total_basis(n, k + 1)) if 0 <= k + 1 <= 2 * n else 0
    cols = [s.d_monomial(m).to_total_vector(k + 1) if tgt_dim else () for m in src]
    M = Matrix.from_columns(cols, tgt_dim) if cols else Matrix([[] for _ in range(tgt_dim)], 0)
    s._cache[key] = M
    return M


# ---------------------------------------------------------------------------
# construction and validation


def make_structure(n: int, d1: Mapping[int, Form] | Sequence[Form], name: str = "", meta=None) -> StructureEquations:
    if isinstance(d1, Mapping):
        forms = tuple(d1.get(k, Form.zero(n)) for k in range(1, n + 1))
    else:
        forms = tuple(d1)
    return StructureEquations(n=n, name=name, d1=forms, meta=dict(meta or {}))


_KEY_HOLO = re.compile(r"^(\d)(\d)$")
_KEY_MIXED = re.compile(r"^(\d)~(\d)$")
_KEY_ANTI = re.compile(r"^~(\d)~(\d)$")


def parse_monomial_key(key: str, n: int) -> Monomial:
    key = key.strip()
    if _KEY_ANTI.match(key):
        raise StructureError("non-integrable input", [f"(0,2) term {key!r} is not allowed in d eta^k"])
    m = _KEY_HOLO.match(key)
    if m:
        j, k = int(m.group(1)), int(m.group(2))
        if not (1 <= j < k <= n):
            raise StructureError("malformed index pair", [f"key {key!r} needs 1 <= j < k <= {n}"])
        return ((j, k), ())
    m = _KEY_MIXED.match(key)
    if m:
        j, k = int(m.group(1)), int(m.group(2))
        if not (1 <= j <= n and 1 <= k <= n):
            raise StructureError("malformed index pair", [f"key {key!r} out of range for n={n}"])
        return ((j,), (k,))
    raise StructureError("malformed index pair", [f"cannot parse key {key!r}"])


def monomial_key(m: Monomial) -> str:
    holo, anti = m
    if len(holo) == 2:
        return f"{holo[0]}{holo[1]}"
    return f"{holo[0]}~{anti[0]}"


def _form_from_mapping(n: int, entries: Mapping[str, str], value_of) -> Form:
    terms = {}
    for key, text in entries.items():
        mono = parse_monomial_key(key, n)
        terms[mono] = terms.get(mono, ZERO) + value_of(key, str(text))
    return Form(n, terms)


def structure_from_dict(doc: Mapping[str, Any], validate_it: bool = True) -> StructureEquations:
    try:
        n = int(doc["n"])
    except (KeyError, TypeError, ValueError) as exc:
        raise StructureError("structure document needs an integer 'n'") from exc
    d = doc.get("d", {}) or {}
    d1 = {}
    for k_text, entries in d.items():
        k = int(k_text)
        if not 1 <= k <= n:
            raise StructureError("malformed generator", [f"generator {k_text!r} out of range"])
        d1[k] = _form_from_mapping(n, entries, lambda key, text: gr(text))
    meta = {k: v for k, v in doc.items() if k not in ("n", "name", "d")}
    s = make_structure(n, d1, name=str(doc.get("name", "")), meta=meta)
    if validate_it:
        report = validate(s)
        if not report.ok:
            raise StructureError("not a Lie-algebra differential", report.violations)
    return s


def parse_structure_file(source: str | Path) -> StructureEquations:
    """Parse JSON text or a path to a JSON structure file, then validate."""
    if isinstance(source, Path) or (isinstance(source, str) and not source.lstrip().startswith("{")):
        try:
            text = Path(source).read_text(encoding="utf-8")
        except OSError as exc:
            raise StructureError(f"cannot read structure file: {exc}") from exc
    else:
        text = source
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StructureError(f"invalid JSON: {exc}") from exc
    return structure_from_dict(doc)


def structure_to_dict(s: StructureEquations) -> dict[str, Any]:
    d = {}
    for k, form in enumerate(s.d1, start=1):
        if form.is_zero():
            continue
        d[str(k)] = {monomial_key(m): format_scalar(c) for m, c in sorted(form.terms.items())}
    out: dict[str, Any] = {"n": s.n, "name": s.name, "d": d}
    for k, v in s.meta.items():
        out[k] = v
    return out


def render_structure_file(s: StructureEquations) -> str:
    return json.dumps(structure_to_dict(s), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _is_nilpotent(s: StructureEquations) -> bool:
    n = s.n
    D1 = total_d_matrix(s, 1)
    tb1 = total_basis(n, 1)
    V: list[tuple] = []
    while True:
        if V:
            forms = [Form.from_total_vector(n, 1, v) for v in V]
            wedges = [a.wedge(b).to_total_vector(2) for i, a in enumerate(forms) for b in forms[i + 1 :]]
        else:
            wedges = []
        wedges = [w for w in wedges if any(not x.is_zero() for x in w)]
        if wedges:
            W = Matrix(wedges)
            # rows of N annihilate span(wedges)
            N = Matrix(mat_kernel(W)) if mat_rank(W) < W.ncols else None
        else:
            N = Matrix.identity(D1.nrows)
        cond = (N @ D1) if N is not None else Matrix([], len(tb1))
        newV = mat_kernel(cond) if cond.nrows else [tuple(ONE if i == j else ZERO for i in range(len(tb1))) for j in range(len(tb1))]
        if len(newV) == len(V):
            return len(V) == len(tb1)
        V = newV


def validate(s: StructureEquations) -> ValidationReport:
    violations = []
    n = s.n
    for k, form in enumerate(s.d1, start=1):
        for m in form.terms:
            p, q = len(m[0]), len(m[1])
            if (p, q) == (0, 2):
                violations.append(f"d eta^{k} has a (0,2) component (non-integrable input)")
            elif (p, q) not in ((2, 0), (1, 1)):
                violations.append(f"d eta^{k} has a term of bidegree ({p},{q})")
    if violations:
        return ValidationReport(False, tuple(violations), False, False)
    for label in range(2 * n):
        dd = s.d(s.d_generator(label))
        if not dd.is_zero():
            name = f"eta^{label + 1}" if label < n else f"conj(eta^{label - n + 1})"
            violations.append(f"d(d {name}) = {dd} != 0")
        if label >= n and s.d_generator(label) != s.d1[label - n].conjugate():
            violations.append(f"d conj(eta^{label - n + 1}) != conj(d eta^{label - n + 1})")
    unimodular = total_d_matrix(s, 2 * n - 1).is_zero()
    nilpotent = _is_nilpotent(s) if not violations else False
    return ValidationReport(not violations, tuple(violations), unimodular, nilpotent)


# ---------------------------------------------------------------------------
# forms expressed in another coframe


def substitute(a: Form, images: Sequence[Form]) -> Form:
    """Replace generator label ``l`` by ``images[l]`` (degree-1 forms)."""
    n = a.n
    out = Form.zero(n)
    cache: dict[Monomial, Form] = {}
    for m, c in a.terms.items():
        if m not in cache:
            holo, anti = m
            labels = [j - 1 for j in holo] + [n + j - 1 for j in anti]
            f = Form.scalar(n, 1)
            for lab in labels:
                f = f.wedge(images[lab])
            cache[m] = f
        out = out + cache[m].scale(c)
    return out


def _gen_form(n: int, label: int, coeffs: Sequence[GaussianRational]) -> Form:
    terms = {}
    for j, c in enumerate(coeffs):
        m = ((j + 1,), ()) if j < n else ((), (j - n + 1,))
        terms[m] = c
    return Form(n, terms)


@dataclass(frozen=True)
class Frame:
    """Coframe change: row ``l`` gives generator ``l`` of the new frame in ambient coordinates.

    Labels ``0..n-1`` are ``nu^k``, labels ``n..2n-1`` their conjugates.
    """

    n: int
    matrix: Matrix

    @classmethod
    def from_holomorphic_rows(cls, n: int, rows: Sequence[Sequence[GaussianRational]]) -> "Frame":
        full = [tuple(r) for r in rows]
        for r in rows:
            # conj(a eta^j + b conj(eta^j)) = conj(b) eta^j + conj(a) conj(eta^j)
            full.append(tuple(x.conj() for x in r[n:]) + tuple(x.conj() for x in r[:n]))
        return cls(n, Matrix(full, 2 * n))

    @classmethod
    def identity(cls, n: int) -> "Frame":
        return cls(n, Matrix.identity(2 * n))

    def inverse_matrix(self) -> Matrix:
        return inverse(self.matrix)

    def to_frame(self, a: Form) -> Form:
        """Rewrite an ambient-coordinate form in the new coframe."""
        Finv = self.inverse_matrix()
        images = [_gen_form(self.n, lab, Finv.rows[lab]) for lab in range(2 * self.n)]
        return substitute(a, images)

    def to_ambient(self, a: Form) -> Form:
        images = [_gen_form(self.n, lab, self.matrix.rows[lab]) for lab in range(2 * self.n)]
        return substitute(a, images)


def derived_structure(base: StructureEquations, frame: Frame, name: str = "") -> StructureEquations:
    """Structure equations of ``base``'s Lie algebra in a new (1,0)-coframe."""
    n = base.n
    d1 = []
    for k in range(n):
        nu_k = _gen_form(n, k, frame.matrix.rows[k])
        d_amb = base.d(nu_k)
        d_new = frame.to_frame(d_amb)
        if not d_new.component(0, 2).is_zero():
            raise StructureError("frame does not define an integrable complex structure",
                                 [f"d nu^{k + 1} has (0,2) part {d_new.component(0, 2)}"])
        d1.append(d_new)
    return make_structure(n, d1, name=name)


# ---------------------------------------------------------------------------
# families


@dataclass(frozen=True)
class FamilySpec:
    """Structure equations and coframe whose coefficients are rational in parameters.

    ``frame[k]`` maps ambient keys ``"j"`` (``eta^j``) and ``"~j"``
    (``conj(eta^j)``) to expressions; generators absent from ``frame`` are the
    identity.  ``d[k]`` uses the structure-file keys.  ``locus`` optionally
    names an expression whose zero set is a declared jump locus.
    """

    n: int
    name: str
    params: tuple[str, ...]
    d: Mapping[int, Mapping[str, CoeffExpr]]
    frame: Mapping[int, Mapping[str, CoeffExpr]] = field(default_factory=dict)
    base: Mapping[str, GaussianRational] = field(default_factory=dict)
    locus: CoeffExpr | None = None
    meta: Mapping[str, Any] = field(default_factory=dict)

    def env(self, values) -> dict[str, GaussianRational]:
        if isinstance(values, Mapping):
            env = {k: gr(v) for k, v in values.items()}
        else:
            if len(self.params) != 1:
                raise ValueError(f"family {self.name!r} needs values for {self.params}")
            env = {self.params[0]: gr(values)}
        missing = set(self.params) - set(env)
        if missing:
            raise ValueError(f"missing parameter values: {sorted(missing)}")
        return env

    def base_env(self) -> dict[str, GaussianRational]:
        return {p: self.base.get(p, ZERO) for p in self.params}


def _eval_named(expr: CoeffExpr, env, where: str) -> GaussianRational:
    try:
        return evaluate(expr, env)
    except EvaluationError as exc:
        shown = ", ".join(f"{k}={format_scalar(v)}" for k, v in env.items())
        raise StructureError(f"pole at {shown}", [f"{where} = {render(expr)}: {exc}"]) from exc


def family_instantiate(f: FamilySpec, values, check: bool = True) -> StructureEquations:
    env = f.env(values)
    n = f.n
    d1 = {}
    for k, entries in f.d.items():
        terms: dict[Monomial, GaussianRational] = {}
        for key, expr in entries.items():
            mono = parse_monomial_key(key, n)
            terms[mono] = terms.get(mono, ZERO) + _eval_named(expr, env, f"d nu^{k}[{key}]")
        d1[k] = Form(n, terms)
    label = ",".join(f"{k}={format_scalar(v)}" for k, v in env.items())
    s = make_structure(n, d1, name=f"{f.name}[{label}]", meta={"family": f.name, "params": {k: format_scalar(v) for k, v in env.items()}})
    if check:
        report = validate(s)
        if not report.ok:
            raise StructureError("not a Lie-algebra differential", report.violations)
    return s


def family_frame(f: FamilySpec, values) -> Frame:
    env = f.env(values)
    n = f.n
    rows = []
    for k in range(1, n + 1):
        row = [ZERO] * (2 * n)
        entries = f.frame.get(k)
        if entries is None:
            row[k - 1] = ONE
        else:
            for key, expr in entries.items():
                key = key.strip()
                anti = key.startswith("~")
                j = int(key.lstrip("~"))
                if not 1 <= j <= n:
                    raise StructureError("malformed frame key", [key])
                row[(n if anti else 0) + j - 1] = row[(n if anti else 0) + j - 1] + _eval_named(expr, env, f"nu^{k}[{key}]")
        rows.append(row)
    frame = Frame.from_holomorphic_rows(n, rows)
    from .exactfield import det

    if det(frame.matrix).is_zero():
        shown = ", ".join(f"{k}={format_scalar(v)}" for k, v in env.items())
        raise StructureError(f"singular frame at {shown}")
    return frame


def family_base(f: FamilySpec) -> StructureEquations:
    return family_instantiate(f, f.base_env())


def family_derived(f: FamilySpec, values) -> StructureEquations:
    """Structure at ``values`` computed from the frame and the base equations."""
    env = f.env(values)
    return derived_structure(family_base(f), family_frame(f, env), name=f"{f.name}[derived]")


def on_locus(f: FamilySpec, values) -> bool | None:
    if f.locus is None:
        return None
    return evaluate(f.locus, f.env(values)).is_zero()


def frame_change_bigrading(f: FamilySpec, values, omega: Form) -> dict[tuple[int, int], Form]:
    """Split an ambient form by the bigrading of the structure at ``values``.

    Returns ``{(p, q): component}`` with every component in ambient
    coordinates; the components sum back to ``omega``.
    """
    frame = family_frame(f, values)
    in_frame = frame.to_frame(omega)
    out = {}
    for p, q in sorted(in_frame.bidegrees()):
        out[(p, q)] = frame.to_ambient(in_frame.component(p, q))
    total = Form.zero(omega.n)
    for piece in out.values():
        total = total + piece
    if total != omega:
        raise StructureError("bigrading components do not re-sum (internal error)")
    return out


def _parse_expr_map(entries: Mapping[str, Any], params) -> dict[str, CoeffExpr]:
    return {str(k): parse_coeff_expr(str(v), params) for k, v in entries.items()}


def family_from_dict(doc: Mapping[str, Any]) -> FamilySpec:
    n = int(doc["n"])
    params = tuple(doc.get("params", ["t"]))
    d = {int(k): _parse_expr_map(v, params) for k, v in (doc.get("d") or {}).items()}
    frame = {int(k): _parse_expr_map(v, params) for k, v in (doc.get("frame") or {}).items()}
    base = {k: gr(str(v)) for k, v in (doc.get("base") or {}).items()}
    locus = parse_coeff_expr(doc["locus"], params) if doc.get("locus") else None
    meta = {k: v for k, v in doc.items() if k not in ("n", "name", "params", "d", "frame", "base", "locus")}
    for entries in d.values():
        for key in entries:
            parse_monomial_key(key, n)
    return FamilySpec(n=n, name=str(doc.get("name", "")), params=params, d=d, frame=frame, base=base, locus=locus, meta=meta)


def family_to_dict(f: FamilySpec) -> dict[str, Any]:
    out: dict[str, Any] = {
        "n": f.n,
        "name": f.name,
        "params": list(f.params),
        "d": {str(k): {key: render(e) for key, e in v.items()} for k, v in f.d.items()},
    }
    if f.frame:
        out["frame"] = {str(k): {key: render(e) for key, e in v.items()} for k, v in f.frame.items()}
    if f.base:
        out["base"] = {k: format_scalar(v) for k, v in f.base.items()}
    if f.locus is not None:
        out["locus"] = render(f.locus)
    out.update(f.meta)
    return out


def is_family_doc(doc: Mapping[str, Any]) -> bool:
    return "params" in doc or "frame" in doc


__all__ = [
    "BidegreeError",
    "FamilySpec",
    "Frame",
    "StructureEquations",
    "StructureError",
    "ValidationReport",
    "derived_structure",
    "family_base",
    "family_derived",
    "family_frame",
    "family_from_dict",
    "family_instantiate",
    "family_to_dict",
    "frame_change_bigrading",
    "make_structure",
    "monomial_key",
    "on_locus",
    "operator_matrix",
    "parse_monomial_key",
    "parse_structure_file",
    "render_structure_file",
    "structure_from_dict",
    "structure_to_dict",
    "total_d_matrix",
    "validate",
]
