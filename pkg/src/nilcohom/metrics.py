"""Metric conditions on invariant Hermitian metrics and positive-feasibility search.

A real (n-1,n-1)-form is identified with a Hermitian matrix through
:func:`~nilcohom.exterior.hermitian_matrix_of_n1n1`; it is strictly positive
iff that matrix is positive definite.  Feasibility of a metric type is the
question whether the linear subspace cut out by its condition contains a
positive definite matrix.  The search is a semi-decision: a verified witness,
a verified separating certificate, or ``undecided``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterator, Sequence

from .cohomology import _op, ddbar_matrix, dim_pq
from .exactfield import (
    ONE,
    ZERO,
    FieldError,
    GaussianRational,
    I,
    Matrix,
    is_pos_def_hermitian,
    is_psd_hermitian,
    mat_kernel,
    mat_solve,
    rref,
    vstack,
)
from .exterior import (
    BidegreeError,
    Form,
    form_of_hermitian_n1n1,
    hermitian_matrix_of_11,
    wedge_power,
)
from .structure import StructureEquations

KINDS = ("gauduchon", "sG", "supersG", "balanced")


class MetricError(ValueError):
    pass


@dataclass(frozen=True)
class MetricFlags:
    positive: bool
    gauduchon: bool
    strongly_gauduchon: bool
    superstrong: bool
    balanced: bool

    def as_dict(self) -> dict[str, bool]:
        return {
            "positive": self.positive,
            "gauduchon": self.gauduchon,
            "strongly_gauduchon": self.strongly_gauduchon,
            "superstrong": self.superstrong,
            "balanced": self.balanced,
        }


def _solvable(M: Matrix, y) -> bool:
    if all(v.is_zero() for v in y):
        return True
    if M.ncols == 0:
        return False
    return mat_solve(M, y) is not None


def form_conditions(s: StructureEquations, omega_pow: Form) -> dict[str, bool]:
    """Linear conditions on a real (n-1,n-1)-form ``omega_pow``."""
    n = s.n
    d_om = s.del_(omega_pow)
    y = d_om.to_vector(n, n - 1)
    return {
        "gauduchon": s.delbar(d_om).is_zero(),
        "sG": _solvable(_op(s, "delbar", n, n - 2), y),
        "supersG": _solvable(ddbar_matrix(s, n - 1, n - 2), y),
        "balanced": s.d(omega_pow).is_zero(),
    }


def check_metric(s: StructureEquations, omega: Form) -> MetricFlags:
    if omega.n != s.n:
        raise MetricError("metric and structure have different dimensions")
    try:
        H = hermitian_matrix_of_11(omega)
    except BidegreeError as exc:
        raise MetricError(str(exc)) from exc
    if not omega.is_real():
        raise MetricError("metric form is not real")
    positive = is_pos_def_hermitian(H)
    c = form_conditions(s, wedge_power(omega, s.n - 1))
    flags = MetricFlags(positive, c["gauduchon"], c["sG"] and c["gauduchon"], c["supersG"], c["balanced"])
    chain = [flags.balanced, flags.superstrong, flags.strongly_gauduchon, flags.gauduchon]
    for a, b in zip(chain, chain[1:]):
        if a and not b:
            raise FieldError(f"metric implication chain broken: {flags}")
    return flags


def ddbar_vanishing(s: StructureEquations, p: int, q: int) -> bool:
    return ddbar_matrix(s, p, q).is_zero()


# ---------------------------------------------------------------------------
# real coordinates on Hermitian matrices


def _herm_basis(n: int) -> list[tuple[Matrix, int]]:
    """Real basis of Hermitian n x n matrices with trace-pairing weights."""
    out = []
    for j in range(n):
        out.append((Matrix([[ONE if (a, b) == (j, j) else ZERO for b in range(n)] for a in range(n)], n), 1))
    for j in range(n):
        for k in range(j + 1, n):
            E = [[ZERO] * n for _ in range(n)]
            E[j][k] = ONE
            E[k][j] = ONE
            out.append((Matrix(E, n), 2))
            F = [[ZERO] * n for _ in range(n)]
            F[j][k] = I
            F[k][j] = -I
            out.append((Matrix(F, n), 2))
    return out


def herm_from_coords(n: int, x: Sequence) -> Matrix:
    B = _herm_basis(n)
    acc = Matrix.zeros(n, n)
    for (M, _), c in zip(B, x):
        if c:
            acc = acc + M.scale(GaussianRational(c))
    return acc


def coords_from_herm(H: Matrix) -> tuple[Fraction, ...]:
    n = H.nrows
    out = [H[j, j].re for j in range(n)]
    for j in range(n):
        for k in range(j + 1, n):
            out.append(H[j, k].re)
            out.append(H[j, k].im)
    return tuple(out)


def _condition_rows(s: StructureEquations, kind: str) -> Matrix:
    """Complex matrix C such that the condition reads C @ coords(Omega) = 0."""
    n = s.n
    N = dim_pq(n, n - 1, n - 1)
    D = _op(s, "del", n - 1, n - 1)
    if kind == "gauduchon":
        return ddbar_matrix(s, n - 1, n - 1)
    if kind == "balanced":
        return vstack(D, _op(s, "delbar", n - 1, n - 1))
    if kind in ("sG", "supersG"):
        M = _op(s, "delbar", n, n - 2) if kind == "sG" else ddbar_matrix(s, n - 1, n - 2)
        ann = mat_kernel(M.T) if M.nrows else []
        if not ann:
            return Matrix.zeros(0, N)
        return Matrix(ann, M.nrows) @ D
    raise ValueError(f"unknown metric kind {kind!r}")


def feasible_subspace(s: StructureEquations, kind: str) -> list[tuple[Fraction, ...]]:
    """Rational basis (real Hermitian coordinates) of the admissible matrices.

    Returned in reduced row echelon form so the basis is canonical.
    """
    n = s.n
    C = _condition_rows(s, kind)
    B = _herm_basis(n)
    cols = []
    for M, _ in B:
        cols.append(form_of_hermitian_n1n1(n, M).to_vector(n - 1, n - 1))
    L = Matrix.from_columns(cols, dim_pq(n, n - 1, n - 1))
    if C.nrows == 0:
        real = Matrix.zeros(0, len(B))
    else:
        CL = C @ L
        real = Matrix([[x.re for x in r] for r in CL.rows] + [[x.im for x in r] for r in CL.rows], len(B))
    ker = mat_kernel(real) if real.nrows else [tuple(ONE if i == j else ZERO for i in range(len(B))) for j in range(len(B))]
    if not ker:
        return []
    R, _ = rref(Matrix(ker, len(B)))
    return [tuple(x.re for x in row) for row in R]


def _orth_complement(basis: list[tuple], weights: list[int]) -> list[tuple[Fraction, ...]]:
    m = len(weights)
    if not basis:
        return [tuple(Fraction(int(i == j)) for i in range(m)) for j in range(m)]
    rows = Matrix([[GaussianRational(v * w) for v, w in zip(b, weights)] for b in basis], m)
    ker = mat_kernel(rows)
    if not ker:
        return []
    R, _ = rref(Matrix(ker, m))
    return [tuple(x.re for x in row) for row in R]


def _combos(m: int, radius: int, budget: int) -> Iterator[tuple[int, ...]]:
    """Integer vectors by increasing sup-norm shells, deterministic order."""
    count = 0
    for r in range(1, radius + 1):
        for c in itertools.product(range(-r, r + 1), repeat=m):
            if max(abs(x) for x in c) != r:
                continue
            yield c
            count += 1
            if count >= budget:
                return


def _combine(basis: list[tuple], c: Sequence[int], base=None) -> tuple[Fraction, ...]:
    m = len(basis[0])
    out = list(base) if base is not None else [Fraction(0)] * m
    for ci, b in zip(c, basis):
        if ci:
            for j in range(m):
                out[j] += ci * b[j]
    return tuple(out)


@dataclass(frozen=True)
class FeasibilityAnswer:
    kind: str
    status: str  # witness | infeasible | undecided
    witness: Form | None = None
    witness_matrix: Matrix | None = None
    certificate: Matrix | None = None
    subspace_dim: int = 0
    note: str = ""

    def as_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"kind": self.kind, "status": self.status, "subspace_dim": self.subspace_dim}
        if self.witness is not None:
            out["witness"] = str(self.witness)
            out["witness_matrix"] = self.witness_matrix.to_strings()
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_strings()
        if self.note:
            out["note"] = self.note
        return out


def _trace_pair(A: Matrix, B: Matrix) -> GaussianRational:
    acc = ZERO
    for j in range(A.nrows):
        for k in range(A.ncols):
            acc = acc + A[j, k] * B[k, j]
    return acc


def verify_witness(s: StructureEquations, kind: str, H: Matrix) -> bool:
    if not is_pos_def_hermitian(H):
        return False
    Om = form_of_hermitian_n1n1(s.n, H)
    return form_conditions(s, Om)[kind]


def verify_certificate(s: StructureEquations, kind: str, K: Matrix) -> bool:
    if K.is_zero() or not is_psd_hermitian(K):
        return False
    n = s.n
    return all(_trace_pair(K, herm_from_coords(n, v)).is_zero() for v in feasible_subspace(s, kind))


def positive_feasibility(
    s: StructureEquations, kind: str, radius: int = 3, budget: int = 20000
) -> FeasibilityAnswer:
    """Search for a positive (n-1,n-1)-form satisfying ``kind``'s condition.

    Witness candidates, in order: the trace-orthogonal projection of the
    identity onto the admissible subspace, then integer combinations of the
    canonical basis of that subspace added to it, by increasing sup norm up to
    ``radius`` (at most ``budget`` candidates).  Certificates are searched the
    same way in the trace-orthogonal complement: a nonzero PSD matrix there
    pairs positively with every positive definite matrix, so none is
    admissible.
    """
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}")
    n = s.n
    if n > 4:
        raise ValueError("feasibility search supports n <= 4")
    V = feasible_subspace(s, kind)
    weights = [w for _, w in _herm_basis(n)]
    W = _orth_complement(V, weights)

    def witness(candidates):
        for x in candidates:
            H = herm_from_coords(n, x)
            if is_pos_def_hermitian(H):
                if not verify_witness(s, kind, H):
                    raise FieldError("witness failed verification (internal error)")
                note = ""
                if kind == "balanced":
                    note = "a positive (n-1,n-1)-form has a unique positive (n-1)-th root, which is then balanced"
                return FeasibilityAnswer(kind, "witness", form_of_hermitian_n1n1(n, H), H, None, len(V), note)
        return None

    def certificate(candidates):
        for y in candidates:
            K = herm_from_coords(n, y)
            if not K.is_zero() and is_psd_hermitian(K):
                if not verify_certificate(s, kind, K):
                    raise FieldError("certificate failed verification (internal error)")
                return FeasibilityAnswer(kind, "infeasible", None, None, K, len(V))
        return None

    proj = _projection_of_identity(n, V, weights) if V else None
    stages = []
    if V:
        stages.append((witness, [proj]))
    if W:
        stages.append((certificate, [tuple(w) for w in W] + [tuple(-x for x in w) for w in W]))
    if V:
        stages.append((witness, (_combine(V, cc, proj) for cc in _combos(len(V), radius, budget))))
        stages.append((witness, (_combine(V, cc) for cc in _combos(len(V), radius, budget))))
    if W:
        stages.append((certificate, (_combine(W, cc) for cc in _combos(len(W), radius, budget))))
    for search, cands in stages:
        found = search(cands)
        if found is not None:
            return found
    return FeasibilityAnswer(kind, "undecided", subspace_dim=len(V), note=f"grid radius {radius}, budget {budget}")


def _projection_of_identity(n: int, V: list[tuple], weights: list[int]) -> tuple[Fraction, ...]:
    """Trace-orthogonal projection of the identity matrix onto span V."""
    ident = coords_from_herm(Matrix.identity(n))

    def pair(u, v):
        return GaussianRational(sum(a * b * w for a, b, w in zip(u, v, weights)))

    G = Matrix([[pair(u, v) for v in V] for u in V], len(V))
    c = mat_solve(G, [pair(u, ident) for u in V])
    return tuple(sum((ci.re * v[j] for ci, v in zip(c, V)), Fraction(0)) for j in range(len(weights)))


__all__ = [
    "FeasibilityAnswer",
    "KINDS",
    "MetricError",
    "MetricFlags",
    "check_metric",
    "coords_from_herm",
    "ddbar_vanishing",
    "feasible_subspace",
    "form_conditions",
    "herm_from_coords",
    "positive_feasibility",
    "verify_certificate",
    "verify_witness",
]
