"""Finite-dimensional Hodge theory on invariant forms for a rational Hermitian metric.

Inner products are built from the inverse metric matrix; the total volume is
normalised to 1, so the standard metric ``i * sum eta^{j jbar}`` makes every
monomial basis orthonormal.  The pairing is ``<x, y> = y^H G x``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Sequence

from .cohomology import (
    ConsistencyError,
    Quotient,
    _op,
    aeppli_space,
    bc_space,
    ddbar_matrix,
    de_rham_space,
    dim_pq,
    is_unimodular,
    map_P,
    sgg_verdict,
)
from .exactfield import (
    I,
    ONE,
    ZERO,
    GaussianRational,
    Matrix,
    det,
    hermitian_form,
    inverse,
    is_pos_def_hermitian,
    mat_kernel,
    mat_rank,
    mat_solve,
    orth_project,
    vadd,
    vis_zero,
    vscale,
    vsub,
    vzero,
)
from .exterior import Form, basis, hermitian_matrix_of_11, hermitian_matrix_of_n1n1, integrate, wedge_power
from .structure import FamilySpec, StructureEquations, family_base, family_derived, family_frame
from .metrics import check_metric


class HodgeError(ValueError):
    pass


def _metric_matrix(omega: Form) -> Matrix:
    H = hermitian_matrix_of_11(omega)
    if not H.is_hermitian() or not is_pos_def_hermitian(H):
        raise HodgeError("metric must be a real positive (1,1)-form")
    return H


def gram(omega: Form, p: int, q: int) -> Matrix:
    """Gram matrix ``G[B, A] = <e_A, e_B>`` on ``basis(n, p, q)``."""
    n = omega.n
    G10 = inverse(_metric_matrix(omega)).T
    G01 = G10.conj()
    B = basis(n, p, q)
    rows = []
    for mb in B:
        row = []
        for ma in B:
            hol = det(G10.submatrix([j - 1 for j in mb[0]], [j - 1 for j in ma[0]])) if p else ONE
            anti = det(G01.submatrix([j - 1 for j in mb[1]], [j - 1 for j in ma[1]])) if q else ONE
            row.append(hol * anti)
        rows.append(row)
    return Matrix(rows, len(B))


def adjoint(M: Matrix, G_src: Matrix, G_dst: Matrix) -> Matrix:
    """``M★ = G_src^{-1} M^H G_dst``, so that ``<Mx, y>_dst = <x, M★y>_src``."""
    if M.ncols == 0 or M.nrows == 0:
        return Matrix.zeros(M.ncols, M.nrows)
    return inverse(G_src) @ M.H @ G_dst


def check_adjoint(M: Matrix, Mstar: Matrix, G_src: Matrix, G_dst: Matrix) -> bool:
    for a in range(M.ncols):
        x = tuple(ONE if i == a else ZERO for i in range(M.ncols))
        for b in range(M.nrows):
            y = tuple(ONE if i == b else ZERO for i in range(M.nrows))
            if hermitian_form(G_dst, M.apply(x), y) != hermitian_form(G_src, x, Mstar.apply(y)):
                return False
    return True


@dataclass
class HodgeData:
    """Gram matrices and adjoint operators of one structure and metric, cached."""

    s: StructureEquations
    omega: Form
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.omega.n != self.s.n:
            raise HodgeError("metric and structure dimensions differ")
        _metric_matrix(self.omega)

    def G(self, p: int, q: int) -> Matrix:
        key = ("G", p, q)
        if key not in self._cache:
            self._cache[key] = gram(self.omega, p, q) if dim_pq(self.s.n, p, q) else Matrix.zeros(0, 0)
        return self._cache[key]

    def op(self, op: str, p: int, q: int) -> Matrix:
        return _op(self.s, op, p, q)

    def star(self, op: str, p: int, q: int) -> Matrix:
        """Adjoint of ``op`` acting from (p,q); maps its target back to (p,q)."""
        key = ("star", op, p, q)
        if key not in self._cache:
            tp, tq = (p + 1, q) if op == "del" else (p, q + 1)
            M = self.op(op, p, q)
            self._cache[key] = adjoint(M, self.G(p, q), self.G(tp, tq)) if M.nrows and M.ncols else Matrix.zeros(M.ncols, M.nrows)
        return self._cache[key]

    def laplacian_dbar(self, p: int, q: int) -> Matrix:
        """``delbar delbar★ + delbar★ delbar`` on (p,q)."""
        n = self.s.n
        N = dim_pq(n, p, q)
        acc = Matrix.zeros(N, N)
        if dim_pq(n, p, q - 1):
            acc = acc + self.op("delbar", p, q - 1) @ self.star("delbar", p, q - 1)
        if dim_pq(n, p, q + 1):
            acc = acc + self.star("delbar", p, q) @ self.op("delbar", p, q)
        return acc


def _vec(a: Form, p: int, q: int) -> tuple:
    return a.component(p, q).to_vector(p, q)


def harmonic_aeppli_space(h: HodgeData, p: int, q: int) -> list[tuple]:
    """Basis of ``ker ddbar ∩ ker del★ ∩ ker delbar★`` on (p,q)."""
    n = h.s.n
    rows = []
    rows.extend(ddbar_matrix(h.s, p, q).rows)
    if dim_pq(n, p - 1, q):
        rows.extend(h.star("del", p - 1, q).rows)
    if dim_pq(n, p, q - 1):
        rows.extend(h.star("delbar", p, q - 1).rows)
    N = dim_pq(n, p, q)
    if not rows:
        return [tuple(ONE if i == j else ZERO for i in range(N)) for j in range(N)]
    return mat_kernel(Matrix(rows, N))


def _exact_sum_basis(h: HodgeData, p: int, q: int) -> list[tuple]:
    n = h.s.n
    W = []
    if dim_pq(n, p - 1, q):
        W += h.op("del", p - 1, q).columns()
    if dim_pq(n, p, q - 1):
        W += h.op("delbar", p, q - 1).columns()
    return [w for w in W if not vis_zero(w)]


def aeppli_harmonic_projection(h: HodgeData, x: Form) -> Form:
    """Harmonic part of ``x`` in ``ker ddbar = harmonic ⊕ (Im del + Im delbar)``."""
    s = h.s
    p, q = x.bidegree() if not x.is_zero() else (s.n - 1, s.n - 1)
    v = x.to_vector(p, q)
    if not vis_zero(ddbar_matrix(s, p, q).apply(v)):
        raise HodgeError("input is not ddbar-closed")
    W = _exact_sum_basis(h, p, q)
    out = vsub(v, orth_project(v, W, h.G(p, q))) if W else v
    n = s.n
    checks = [ddbar_matrix(s, p, q).apply(out)]
    if dim_pq(n, p - 1, q):
        checks.append(h.star("del", p - 1, q).apply(out))
    if dim_pq(n, p, q - 1):
        checks.append(h.star("delbar", p, q - 1).apply(out))
    if not all(vis_zero(c) for c in checks):
        raise ConsistencyError("harmonic projection is not Aeppli-harmonic")
    return Form.from_vector(n, p, q, out)


def split_exact_part(h: HodgeData, r: Form, p: int, q: int) -> tuple[Form, Form]:
    """``(a, b)`` with ``r = del a + delbar b``; a in (p-1,q), b in (p,q-1)."""
    n = h.s.n
    Da = h.op("del", p - 1, q) if dim_pq(n, p - 1, q) else Matrix.zeros(dim_pq(n, p, q), 0)
    Db = h.op("delbar", p, q - 1) if dim_pq(n, p, q - 1) else Matrix.zeros(dim_pq(n, p, q), 0)
    M = Matrix([ra + rb for ra, rb in zip(Da.rows, Db.rows)], Da.ncols + Db.ncols)
    v = r.to_vector(p, q) if not r.is_zero() else vzero(M.nrows)
    if vis_zero(v):
        return Form.zero(n), Form.zero(n)
    sol = mat_solve(M, v)
    if sol is None:
        raise HodgeError("form is not in Im del + Im delbar")
    a = Form.from_vector(n, p - 1, q, sol[: Da.ncols]) if Da.ncols else Form.zero(n)
    b = Form.from_vector(n, p, q - 1, sol[Da.ncols :]) if Db.ncols else Form.zero(n)
    return a, b


def dbar_minimal_solution(h: HodgeData, y: Form, p: int | None = None, q: int | None = None) -> Form:
    """The minimal-norm ``x`` with ``delbar x = y``.

    Solves ``Laplacian'' z = y`` and returns ``x = delbar★ z``; the result is
    checked to solve the equation and to be orthogonal to ``ker delbar``.
    """
    s = h.s
    n = s.n
    if p is None:
        p, q = y.bidegree()
    yv = y.to_vector(p, q) if not y.is_zero() else vzero(dim_pq(n, p, q))
    if not dim_pq(n, p, q - 1):
        if vis_zero(yv):
            return Form.zero(n)
        raise HodgeError("equation delbar x = y has no solution (no source bidegree)")
    D = h.op("delbar", p, q - 1)
    if mat_solve(D, yv) is None:
        raise HodgeError("equation delbar x = y has no solution: y is not delbar-exact")
    if vis_zero(yv):
        return Form.zero(n)
    z = mat_solve(h.laplacian_dbar(p, q), yv)
    if z is None:
        raise ConsistencyError("Laplacian equation unsolvable for a delbar-exact right-hand side")
    x = h.star("delbar", p, q - 1).apply(z)
    if D.apply(x) != tuple(yv):
        raise ConsistencyError("minimal solution does not solve the equation")
    G = h.G(p, q - 1)
    for k in mat_kernel(D):
        if not hermitian_form(G, x, k).is_zero():
            raise ConsistencyError("minimal solution is not orthogonal to ker delbar")
    return Form.from_vector(n, p, q - 1, x)


def dbar_least_squares(h: HodgeData, y: Form, p: int, q: int) -> Form:
    """Minimal-norm solution of ``delbar x = proj(y)`` with ``proj`` onto ``Im delbar``."""
    n = h.s.n
    D = h.op("delbar", p, q - 1)
    yv = y.to_vector(p, q) if not y.is_zero() else vzero(dim_pq(n, p, q))
    proj = orth_project(yv, [c for c in D.columns() if not vis_zero(c)], h.G(p, q))
    return dbar_minimal_solution(h, Form.from_vector(n, p, q, proj), p, q)


# ---------------------------------------------------------------------------
# real bases


def conj_vec(n: int, v: Sequence, p: int, q: int) -> tuple:
    return Form.from_vector(n, p, q, v).conjugate().to_vector(q, p)


def real_basis(Q: Quotient, n: int, p: int) -> list[tuple]:
    """Conj-fixed representatives of a basis of a (p,p) quotient."""
    chosen: list[tuple] = []
    for r in Q.reps:
        c = conj_vec(n, r, p, p)
        for cand in (vadd(r, c), vscale(I, vsub(r, c))):
            if vis_zero(cand):
                continue
            trial = chosen + [cand]
            coords = [Q.coords(v) for v in trial]
            if mat_rank(Matrix(coords, Q.dim)) == len(trial):
                chosen = trial
            if len(chosen) == Q.dim:
                return chosen
    if len(chosen) != Q.dim:
        raise ConsistencyError("quotient is not spanned by real classes")
    return chosen


# ---------------------------------------------------------------------------
# fake Hodge-Aeppli decomposition


@dataclass(frozen=True)
class ClassLift:
    """The closed (2n-2)-form attached to one real Aeppli class."""

    representative: Form
    harmonic: Form
    gamma: Form
    top: Form  # the (n, n-2) part
    assembled: Form
    d_closed: bool
    real: bool


def lift_class(h: HodgeData, x: Form, require_exact: bool = True) -> ClassLift:
    """Assemble ``Omega = Omega^{n,n-2} + x + conj(Omega^{n,n-2})`` for a real ddbar-closed x.

    ``Omega^{n,n-2} = X_A + del Gamma`` where ``X_A`` is the minimal-norm
    solution of ``delbar X_A = -del x_A`` for the harmonic part ``x_A``, and
    ``x - x_A = del conj(Gamma) + delbar Gamma``.  When ``del x_A`` is not
    delbar-exact and ``require_exact`` is false, the least-squares solution is
    used instead and the result is not closed.
    """
    s = h.s
    n = s.n
    if not x.is_real():
        raise HodgeError("representative must be real")
    xa = aeppli_harmonic_projection(h, x)
    a, b = split_exact_part(h, x - xa, n - 1, n - 1)
    gamma = (b + a.conjugate()).scale(GaussianRational(1, 0) / 2)
    if s.del_(gamma.conjugate()) + s.delbar(gamma) != x - xa:
        raise ConsistencyError("real choice of Gamma does not reproduce the exact part")
    rhs = -s.del_(xa)
    try:
        XA = dbar_minimal_solution(h, rhs, n, n - 1)
    except HodgeError:
        if require_exact:
            raise HodgeError("del of the harmonic part is not delbar-exact; the structure is not sGG for this class")
        XA = dbar_least_squares(h, rhs, n, n - 1)
    top = XA + s.del_(gamma)
    Om = top + x + top.conjugate()
    return ClassLift(x, xa, gamma, top, Om, s.d(Om).is_zero(), Om.is_real())


@dataclass(frozen=True)
class FakeDecomposition:
    aeppli_basis: list[Form]
    lifts: list[ClassLift]
    P_matrix: Matrix
    Q_matrix: Matrix
    PQ: Matrix
    QstarPstar: Matrix
    bc_basis: list[Form]
    dims: dict[str, int]

    def as_dict(self) -> dict[str, Any]:
        return {
            "dims": dict(self.dims),
            "P": self.P_matrix.to_strings(),
            "Q": self.Q_matrix.to_strings(),
            "PQ": self.PQ.to_strings(),
            "QstarPstar": self.QstarPstar.to_strings(),
            "assembled": [str(l.assembled) for l in self.lifts],
            "all_closed": all(l.d_closed for l in self.lifts),
            "all_real": all(l.real for l in self.lifts),
        }


def build_Q(s: StructureEquations, omega: Form) -> FakeDecomposition:
    n = s.n
    if not is_unimodular(s):
        raise HodgeError("fake decomposition needs a unimodular algebra")
    if not sgg_verdict(s).sgg:
        raise HodgeError(
            "structure is not sGG: del of a harmonic Aeppli representative need not be delbar-exact, "
            "so the (n,n-2) correction does not exist"
        )
    h = HodgeData(s, omega)
    A = aeppli_space(s, n - 1, n - 1)
    reals = [Form.from_vector(n, n - 1, n - 1, v) for v in real_basis(A, n, n - 1)]
    lifts = [lift_class(h, x) for x in reals]
    for l in lifts:
        if not (l.d_closed and l.real):
            raise ConsistencyError("assembled form is not real and closed")
    DR = de_rham_space(s, 2 * n - 2)
    Qcols = [DR.coords(l.assembled.to_total_vector(2 * n - 2)) for l in lifts]
    Qm = Matrix.from_columns(Qcols, DR.dim) if Qcols else Matrix.zeros(DR.dim, 0)
    Pm = map_P(s).matrix
    # express P(Q(x_i)) in the real Aeppli basis
    Acoords = Matrix.from_columns([A.coords(x.to_vector(n - 1, n - 1)) for x in reals], A.dim) if reals else Matrix.zeros(A.dim, 0)
    PQ_cols = []
    for col in (Pm @ Qm).columns() if reals else []:
        c = mat_solve(Acoords, col)
        if c is None:
            raise ConsistencyError("P(Q(x)) outside the Aeppli space")
        PQ_cols.append(c)
    PQ = Matrix.from_columns(PQ_cols, len(reals)) if reals else Matrix.zeros(0, 0)
    if mat_rank(Qm) != len(reals) if reals else False:
        raise ConsistencyError("Q is not injective")
    # dual side: Q★ P★ on real Bott-Chern (1,1) classes via integration pairings
    BC = bc_space(s, 1, 1)
    bcs = [Form.from_vector(n, 1, 1, v) for v in real_basis(BC, n, 1)]
    N = Matrix([[integrate(al.wedge(x)) for x in reals] for al in bcs], len(reals)) if bcs else Matrix.zeros(0, len(reals))
    if bcs and mat_rank(N) != len(bcs):
        raise ConsistencyError("Bott-Chern/Aeppli pairing is degenerate")
    cols = []
    for al in bcs:
        r = [integrate(al.wedge(l.assembled)) for l in lifts]
        beta = mat_solve(N.T, r)
        if beta is None:
            raise ConsistencyError("Q★ is not defined on this class")
        cols.append(beta)
    QP = Matrix.from_columns(cols, len(bcs)) if bcs else Matrix.zeros(0, 0)
    return FakeDecomposition(
        aeppli_basis=reals,
        lifts=lifts,
        P_matrix=Pm,
        Q_matrix=Qm,
        PQ=PQ,
        QstarPstar=QP,
        bc_basis=bcs,
        dims={"aeppli_n1n1": A.dim, "de_rham_2n2": DR.dim, "bc_11": BC.dim},
    )


def compare_Q(s: StructureEquations, omega1: Form, omega2: Form) -> dict[str, Any]:
    """Q for two metrics on the same Aeppli basis; the section identity holds for both."""
    a, b = build_Q(s, omega1), build_Q(s, omega2)
    return {
        "structure": s.name,
        "Q_differs": a.Q_matrix != b.Q_matrix,
        "section_identity": a.PQ == b.PQ == Matrix.identity(a.dims["aeppli_n1n1"]),
        "Q1": a.Q_matrix.to_strings(),
        "Q2": b.Q_matrix.to_strings(),
    }


# ---------------------------------------------------------------------------
# transport along a family


@dataclass(frozen=True)
class TransportRow:
    t: str
    pd: bool
    gauduchon: bool
    component: Form
    matrix: Matrix | None
    error: str = ""

    def as_dict(self) -> dict[str, Any]:
        out = {"t": self.t, "pd": self.pd, "gauduchon": self.gauduchon, "component": str(self.component)}
        if self.matrix is not None:
            out["matrix"] = self.matrix.to_strings()
        if self.error:
            out["error"] = self.error
        return out


@dataclass(frozen=True)
class TransportReport:
    family: str
    base_sgg: bool
    class_sg: bool
    d_closed: bool
    omega: Form
    rows: list[TransportRow]
    notes: list[str]

    def as_dict(self) -> dict[str, Any]:
        return {
            "family": self.family,
            "base_sgg": self.base_sgg,
            "class_sg": self.class_sg,
            "d_closed": self.d_closed,
            "omega": str(self.omega),
            "rows": [r.as_dict() for r in self.rows],
            "notes": list(self.notes),
        }


def transport_gauduchon(f: FamilySpec, gamma0: Form, omega0: Form, t_samples: Sequence) -> TransportReport:
    """Carry the class of ``gamma0^{n-1}`` to nearby fibres through a closed lift.

    At t=0 the form ``Omega`` is built from ``gamma0^{n-1}`` and ``omega0``
    as in :func:`lift_class`; each sample re-splits ``Omega`` by the
    bigrading of ``J_t`` and tests the middle component.
    """
    from .exactfield import format_scalar, gr

    s0 = family_base(f)
    n = s0.n
    flags = check_metric(s0, gamma0)
    if not (flags.positive and flags.gauduchon):
        raise HodgeError("gamma0 must be a positive Gauduchon metric of the base structure")
    notes = []
    base_sgg = sgg_verdict(s0).sgg
    h = HodgeData(s0, omega0)
    x = wedge_power(gamma0, n - 1)
    class_sg = flags.strongly_gauduchon
    lift = lift_class(h, x, require_exact=False)
    if not base_sgg:
        notes.append("base structure is not sGG")
    if not lift.d_closed:
        notes.append(
            "the class of gamma0^{n-1} is not sG on the base, so no closed lift exists; "
            "the (n,n-2) part is the least-squares solution and Omega is not closed"
        )
    rows = []
    for t in t_samples:
        tv = gr(t)
        label = format_scalar(tv)
        try:
            frame = family_frame(f, tv)
            st = family_derived(f, tv)
            comp = frame.to_frame(lift.assembled).component(n - 1, n - 1)
            H = hermitian_matrix_of_n1n1(comp)
            pd = H.is_hermitian() and is_pos_def_hermitian(H)
            gd = st.del_(st.delbar(comp)).is_zero()
            rows.append(TransportRow(label, pd, gd, comp, H))
        except (ValueError, ArithmeticError) as exc:
            rows.append(TransportRow(label, False, False, Form.zero(n), None, str(exc)))
    return TransportReport(f.name, base_sgg, class_sg, lift.d_closed, lift.assembled, rows, notes)


__all__ = [
    "ClassLift",
    "compare_Q",
    "FakeDecomposition",
    "HodgeData",
    "HodgeError",
    "TransportReport",
    "TransportRow",
    "adjoint",
    "aeppli_harmonic_projection",
    "build_Q",
    "check_adjoint",
    "dbar_least_squares",
    "dbar_minimal_solution",
    "gram",
    "harmonic_aeppli_space",
    "lift_class",
    "real_basis",
    "split_exact_part",
    "transport_gauduchon",
]
