"""Invariant cohomologies, Frölicher pages, the canonical maps and the sGG verdict.

Every group is computed on left-invariant forms (the Chevalley-Eilenberg
complex of the complexified dual Lie algebra).  Quotients are represented by
an explicit set of representatives completing a basis of the subspace they
are taken modulo; induced maps act on representatives and are checked to be
well defined.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

from .exactfield import (
    Matrix,
    Vector,
    independent_subset,
    mat_kernel,
    mat_rank,
    mat_solve,
    span_basis,
    subspace_sum_dim,
    vis_zero,
    vstack,
)
from .exterior import Form, basis, total_basis
from .structure import StructureEquations, operator_matrix, total_d_matrix, validate


class ConsistencyError(AssertionError):
    """An exact identity that must hold on valid input failed (an implementation bug)."""


def _in_range(n: int, p: int, q: int) -> bool:
    return 0 <= p <= n and 0 <= q <= n


def dim_pq(n: int, p: int, q: int) -> int:
    return len(basis(n, p, q)) if _in_range(n, p, q) else 0


def dim_k(n: int, k: int) -> int:
    return len(total_basis(n, k)) if 0 <= k <= 2 * n else 0


def _op(s: StructureEquations, op: str, p: int, q: int) -> Matrix:
    """Operator matrix with explicit zero-size shapes outside the valid range."""
    n = s.n
    src = dim_pq(n, p, q)
    tp, tq = (p + 1, q) if op == "del" else (p, q + 1)
    tgt = dim_pq(n, tp, tq)
    if src == 0 or tgt == 0:
        return Matrix.zeros(tgt, src)
    return operator_matrix(s, op, p, q)


def ddbar_matrix(s: StructureEquations, p: int, q: int) -> Matrix:
    """Matrix of del∘delbar : Lambda^{p,q} -> Lambda^{p+1,q+1}."""
    key = ("ddbar", p, q)
    if key not in s._cache:
        s._cache[key] = _op(s, "del", p, q + 1) @ _op(s, "delbar", p, q)
    return s._cache[key]


def _d(s: StructureEquations, k: int) -> Matrix:
    n = s.n
    src, tgt = dim_k(n, k), dim_k(n, k + 1)
    if src == 0 or tgt == 0:
        return Matrix.zeros(tgt, src)
    return total_d_matrix(s, k)


def _rank(s: StructureEquations, key, M: Matrix) -> int:
    k = ("rank",) + key
    if k not in s._cache:
        s._cache[k] = mat_rank(M)
    return s._cache[k]


def _image(M: Matrix) -> list[Vector]:
    return span_basis(M.columns()) if M.ncols and M.nrows else []


# ---------------------------------------------------------------------------
# dimensions


def betti(s: StructureEquations, k: int) -> int:
    n = s.n
    if not 0 <= k <= 2 * n:
        return 0
    return dim_k(n, k) - _rank(s, ("d", k), _d(s, k)) - _rank(s, ("d", k - 1), _d(s, k - 1))


def hodge_number(s: StructureEquations, p: int, q: int) -> int:
    n = s.n
    if not _in_range(n, p, q):
        return 0
    return (
        dim_pq(n, p, q)
        - _rank(s, ("delbar", p, q), _op(s, "delbar", p, q))
        - _rank(s, ("delbar", p, q - 1), _op(s, "delbar", p, q - 1))
    )


def del_number(s: StructureEquations, p: int, q: int) -> int:
    """Dimension of the del-cohomology (conjugate of Dolbeault) in bidegree (p,q)."""
    n = s.n
    if not _in_range(n, p, q):
        return 0
    return (
        dim_pq(n, p, q)
        - _rank(s, ("del", p, q), _op(s, "del", p, q))
        - _rank(s, ("del", p - 1, q), _op(s, "del", p - 1, q))
    )


def _dd_stack(s: StructureEquations, p: int, q: int) -> Matrix:
    return vstack(_op(s, "del", p, q), _op(s, "delbar", p, q))


def bc_number(s: StructureEquations, p: int, q: int) -> int:
    n = s.n
    if not _in_range(n, p, q):
        return 0
    stacked = _dd_stack(s, p, q)
    ker = dim_pq(n, p, q) - _rank(s, ("dd", p, q), stacked)
    img = _rank(s, ("ddbar", p - 1, q - 1), ddbar_matrix(s, p - 1, q - 1))
    return ker - img


def aeppli_number(s: StructureEquations, p: int, q: int) -> int:
    n = s.n
    if not _in_range(n, p, q):
        return 0
    ker = dim_pq(n, p, q) - _rank(s, ("ddbar", p, q), ddbar_matrix(s, p, q))
    A = _op(s, "del", p - 1, q).columns()
    B = _op(s, "delbar", p, q - 1).columns()
    return ker - subspace_sum_dim(A, B)


def check_complex_identities(s: StructureEquations) -> None:
    """del^2 = delbar^2 = del delbar + delbar del = 0 in every bidegree, and the
    containments Im ddbar ⊆ ker del ∩ ker delbar, Im del + Im delbar ⊆ ker ddbar."""
    n = s.n
    for p in range(n + 1):
        for q in range(n + 1):
            checks = {
                "del^2": _op(s, "del", p + 1, q) @ _op(s, "del", p, q),
                "delbar^2": _op(s, "delbar", p, q + 1) @ _op(s, "delbar", p, q),
                "del delbar + delbar del": ddbar_matrix(s, p, q) + _op(s, "delbar", p + 1, q) @ _op(s, "del", p, q),
                "del ddbar": _op(s, "del", p + 1, q + 1) @ ddbar_matrix(s, p, q),
                "delbar ddbar": _op(s, "delbar", p + 1, q + 1) @ ddbar_matrix(s, p, q),
                "ddbar del": ddbar_matrix(s, p + 1, q) @ _op(s, "del", p, q),
                "ddbar delbar": ddbar_matrix(s, p, q + 1) @ _op(s, "delbar", p, q),
            }
            for label, M in checks.items():
                if not M.is_zero():
                    raise ConsistencyError(f"{label} != 0 on ({p},{q}) for {s.name!r}")


# ---------------------------------------------------------------------------
# quotient spaces


@dataclass
class Quotient:
    """``cycles / boundaries`` with explicit representatives.

    ``reps`` complete a basis of ``boundaries`` to a basis of ``cycles``.
    """

    dim_ambient: int
    cycles: list[Vector]
    boundaries: list[Vector]
    reps: list[Vector]
    label: str = ""
    _solver: Matrix | None = field(default=None, repr=False)

    @property
    def dim(self) -> int:
        return len(self.reps)

    def _matrix(self) -> Matrix:
        if self._solver is None:
            cols = list(self.reps) + list(self.boundaries)
            self._solver = Matrix.from_columns(cols, self.dim_ambient) if cols else Matrix.zeros(self.dim_ambient, 0)
        return self._solver

    def contains_cycle(self, v: Sequence) -> bool:
        M = self._matrix()
        return vis_zero(v) if M.ncols == 0 else mat_solve(M, v) is not None

    def coords(self, v: Sequence) -> Vector:
        """Coordinates of the class of ``v`` on ``reps``; ``v`` must be a cycle."""
        if self.dim_ambient == 0:
            return ()
        M = self._matrix()
        if M.ncols == 0:
            if not vis_zero(v):
                raise ConsistencyError(f"vector is not a cycle of {self.label}")
            return ()
        sol = mat_solve(M, v)
        if sol is None:
            raise ConsistencyError(f"vector is not a cycle of {self.label}")
        return sol[: self.dim]

    def is_boundary(self, v: Sequence) -> bool:
        return vis_zero(self.coords(v))


def make_quotient(dim_ambient: int, cycles: list[Vector], boundaries: list[Vector], label: str = "") -> Quotient:
    boundaries = span_basis(boundaries) if boundaries else []
    if boundaries and subspace_sum_dim(boundaries, cycles) != len(cycles):
        raise ConsistencyError(f"boundaries not contained in cycles for {label}")
    allv = list(boundaries) + list(cycles)
    idx = independent_subset(allv) if allv else []
    reps = [allv[i] for i in idx if i >= len(boundaries)]
    if len(reps) != len(cycles) - len(boundaries):
        raise ConsistencyError(f"quotient dimension mismatch for {label}")
    return Quotient(dim_ambient, list(cycles), boundaries, reps, label)


def _cached(s: StructureEquations, key, build: Callable[[], Quotient]) -> Quotient:
    k = ("quot",) + key
    if k not in s._cache:
        s._cache[k] = build()
    return s._cache[k]


def dolbeault_space(s: StructureEquations, p: int, q: int) -> Quotient:
    n = s.n

    def build():
        Z = mat_kernel(_op(s, "delbar", p, q)) if dim_pq(n, p, q) else []
        B = _image(_op(s, "delbar", p, q - 1))
        return make_quotient(dim_pq(n, p, q), Z, B, f"H_dbar^({p},{q})")

    return _cached(s, ("dolb", p, q), build)


def del_space(s: StructureEquations, p: int, q: int) -> Quotient:
    n = s.n

    def build():
        Z = mat_kernel(_op(s, "del", p, q)) if dim_pq(n, p, q) else []
        B = _image(_op(s, "del", p - 1, q))
        return make_quotient(dim_pq(n, p, q), Z, B, f"H_del^({p},{q})")

    return _cached(s, ("del", p, q), build)


def bc_space(s: StructureEquations, p: int, q: int) -> Quotient:
    n = s.n

    def build():
        Z = mat_kernel(_dd_stack(s, p, q)) if dim_pq(n, p, q) else []
        B = _image(ddbar_matrix(s, p - 1, q - 1))
        return make_quotient(dim_pq(n, p, q), Z, B, f"H_BC^({p},{q})")

    return _cached(s, ("bc", p, q), build)


def aeppli_space(s: StructureEquations, p: int, q: int) -> Quotient:
    n = s.n

    def build():
        Z = mat_kernel(ddbar_matrix(s, p, q)) if dim_pq(n, p, q) else []
        B = _image(_op(s, "del", p - 1, q)) + _image(_op(s, "delbar", p, q - 1))
        return make_quotient(dim_pq(n, p, q), Z, B, f"H_A^({p},{q})")

    return _cached(s, ("aeppli", p, q), build)


def de_rham_space(s: StructureEquations, k: int) -> Quotient:
    n = s.n

    def build():
        Z = mat_kernel(_d(s, k)) if dim_k(n, k) else []
        B = _image(_d(s, k - 1))
        return make_quotient(dim_k(n, k), Z, B, f"H_DR^{k}")

    return _cached(s, ("dr", k), build)


def induced_map(src: Quotient, dst: Quotient, f: Callable[[Vector], Vector], label: str = "") -> Matrix:
    """Matrix (columns = images of ``src.reps``) of the map induced by ``f``.

    Well-definedness is verified: ``f`` sends every boundary of ``src`` to a
    boundary of ``dst`` and every representative to a cycle of ``dst``.
    """
    for b in src.boundaries:
        if not dst.is_boundary(f(b)):
            raise ConsistencyError(f"{label}: boundary not mapped to a boundary")
    cols = [dst.coords(f(r)) for r in src.reps]
    if not cols:
        return Matrix.zeros(dst.dim, 0)
    return Matrix.from_columns(cols, dst.dim)


# ---------------------------------------------------------------------------
# Frölicher spectral sequence


def _holo_degrees(n: int, k: int) -> list[int]:
    return [len(m[0]) for m in total_basis(n, k)]


def _filtered_cycles(s: StructureEquations, p: int, r: int, k: int) -> list[Vector]:
    """Basis of Z_r^p in degree k: x in F^p with dx in F^{p+r}."""
    n = s.n
    N = dim_k(n, k)
    if N == 0:
        return []
    hd = _holo_degrees(n, k)
    cols = [j for j in range(N) if hd[j] >= p]
    if not cols:
        return []
    D = _d(s, k)
    hd1 = _holo_degrees(n, k + 1) if dim_k(n, k + 1) else []
    rows = [i for i in range(len(hd1)) if hd1[i] < p + r]
    if rows:
        ker = mat_kernel(D.submatrix(rows, cols))
    else:
        ker = [tuple(1 if a == b else 0 for a in range(len(cols))) for b in range(len(cols))]
    out = []
    for v in ker:
        full = [0] * N
        for j, c in zip(cols, v):
            full[j] = c
        out.append(tuple(Matrix([full]).rows[0]))
    return out


def froelicher_pages(s: StructureEquations, max_r: int | None = None) -> dict[int, dict[tuple[int, int], int]]:
    """``{r: {(p,q): dim E_r^{p,q}}}`` for r = 1..max_r (default 2n+1)."""
    key = ("pages", max_r)
    if key in s._cache:
        return s._cache[key]
    n = s.n
    max_r = max_r or 2 * n + 1
    pages: dict[int, dict[tuple[int, int], int]] = {}
    zc: dict[tuple[int, int, int], list[Vector]] = {}
    dims: dict[tuple, int] = {}

    def key(p, r, k):
        # Z_r^p depends on p and r only through F^p and F^{p+r}, both clamped to 0..n+1
        return (min(max(p, 0), n + 1), min(max(p + r, 0), n + 1), k)

    def Z(p, r, k):
        t = key(p, r, k)
        if t not in zc:
            zc[t] = _filtered_cycles(s, t[0], t[1] - t[0], k)
        return zc[t]

    for r in range(1, max_r + 1):
        page = {}
        for p in range(n + 1):
            for q in range(n + 1):
                k = p + q
                t = (key(p, r, k), key(p + 1, r - 1, k), key(p - r + 1, r - 1, k - 1))
                if t not in dims:
                    top = Z(p, r, k)
                    low = Z(p + 1, r - 1, k)
                    src = Z(p - r + 1, r - 1, k - 1)
                    D = _d(s, k - 1)
                    dsrc = [D.apply(v) for v in src] if src else []
                    dims[t] = len(top) - subspace_sum_dim(low, dsrc)
                page[(p, q)] = dims[t]
        pages[r] = page
    s._cache[key] = pages
    return pages


def degeneration_step(pages: dict[int, dict[tuple[int, int], int]]) -> int:
    rs = sorted(pages)
    last = pages[rs[-1]]
    step = rs[-1]
    for r in reversed(rs):
        if pages[r] == last:
            step = r
        else:
            break
    return step


def e2_zigzag(s: StructureEquations, p: int, q: int) -> int:
    """Independent E_2 dimension from the zig-zag description.

    E_2^{p,q} = {x : delbar x = 0, del x ∈ Im delbar} /
                (Im delbar + del(ker delbar on (p-1,q))).
    """
    n = s.n
    N = dim_pq(n, p, q)
    if N == 0:
        return 0
    # unknowns (x, y) with delbar x = 0 and del x + delbar y = 0, y in (p+1, q-1)
    M_x1 = _op(s, "delbar", p, q)
    M_x2 = _op(s, "del", p, q)
    Ny = dim_pq(n, p + 1, q - 1)
    M_y2 = _op(s, "delbar", p + 1, q - 1) if Ny else Matrix.zeros(M_x2.nrows, 0)
    top = Matrix([list(r) + [0] * Ny for r in M_x1.rows], N + Ny)
    bot = Matrix([list(a) + list(b) for a, b in zip(M_x2.rows, M_y2.rows)], N + Ny)
    sol = mat_kernel(vstack(top, bot))
    Zx = [v[:N] for v in sol]
    z2 = mat_rank(Matrix(Zx)) if Zx else 0
    B = _op(s, "delbar", p, q - 1).columns()
    kprev = mat_kernel(_op(s, "delbar", p - 1, q)) if dim_pq(n, p - 1, q) else []
    Dp = _op(s, "del", p - 1, q)
    B = B + [Dp.apply(v) for v in kprev]
    return z2 - (mat_rank(Matrix(B)) if B else 0)


# ---------------------------------------------------------------------------
# canonical maps


@dataclass(frozen=True)
class MapData:
    name: str
    matrix: Matrix
    rank: int
    source_dim: int
    target_dim: int

    def as_dict(self) -> dict[str, Any]:
        return {
            "rank": self.rank,
            "source_dim": self.source_dim,
            "target_dim": self.target_dim,
            "matrix": self.matrix.to_strings(),
        }


def _mapdata(name: str, M: Matrix, src: Quotient, dst: Quotient) -> MapData:
    return MapData(name, M, mat_rank(M) if M.nrows and M.ncols else 0, src.dim, dst.dim)


def map_T(s: StructureEquations) -> MapData:
    """T : H_A^{n-1,n-1} -> H_dbar^{n,n-1}, [Omega] -> [del Omega]."""
    n = s.n
    src = aeppli_space(s, n - 1, n - 1)
    dst = dolbeault_space(s, n, n - 1)
    D = _op(s, "del", n - 1, n - 1)
    return _mapdata("T", induced_map(src, dst, D.apply, "T"), src, dst)


def map_S(s: StructureEquations) -> MapData:
    """S : H_dbar^{n,n-1} -> H_A^{n,n-1}, identity on representatives."""
    n = s.n
    src = dolbeault_space(s, n, n - 1)
    dst = aeppli_space(s, n, n - 1)
    return _mapdata("S", induced_map(src, dst, lambda v: v, "S"), src, dst)


def map_S_exactness(s: StructureEquations) -> dict[str, Any]:
    T = map_T(s)
    S = map_S(s)
    comp = S.matrix @ T.matrix if T.matrix.ncols else Matrix.zeros(S.matrix.nrows, 0)
    ker_S = S.source_dim - S.rank
    surjective = S.rank == S.target_dim
    exact = comp.is_zero() and T.rank == ker_S
    return {"rank_T": T.rank, "rank_S": S.rank, "ker_S_dim": ker_S, "surjective": surjective, "exact": exact}


def map_Sstar(s: StructureEquations) -> MapData:
    """S★ : H_BC^{0,1} -> H_dbar^{0,1}."""
    src = bc_space(s, 0, 1)
    dst = dolbeault_space(s, 0, 1)
    return _mapdata("S*", induced_map(src, dst, lambda v: v, "S*"), src, dst)


def map_Tstar(s: StructureEquations) -> MapData:
    """T★ : H_dbar^{0,1} -> H_BC^{1,1}, [v] -> [del v]."""
    src = dolbeault_space(s, 0, 1)
    dst = bc_space(s, 1, 1)
    D = _op(s, "del", 0, 1)
    return _mapdata("T*", induced_map(src, dst, D.apply, "T*"), src, dst)


def map_Sstar_Tstar(s: StructureEquations) -> dict[str, Any]:
    Ss = map_Sstar(s)
    Ts = map_Tstar(s)
    comp = Ts.matrix @ Ss.matrix if Ss.matrix.ncols else Matrix.zeros(Ts.matrix.nrows, 0)
    ker_T = Ts.source_dim - Ts.rank
    injective = Ss.rank == Ss.source_dim
    exact = comp.is_zero() and Ss.rank == ker_T
    return {"rank_Sstar": Ss.rank, "rank_Tstar": Ts.rank, "ker_Tstar_dim": ker_T, "injective": injective, "exact": exact}


def _split_total(n: int, k: int, v: Sequence) -> Form:
    return Form.from_total_vector(n, k, v)


def map_F(s: StructureEquations) -> MapData:
    """F : H^1_DR -> H_dbar^{0,1} (+) conj(H_dbar^{0,1}).

    The second summand is realised as the del-cohomology H_del^{1,0} (its
    conjugate), with the class of alpha^{1,0}.
    """
    n = s.n
    src = de_rham_space(s, 1)
    h01 = dolbeault_space(s, 0, 1)
    h10 = del_space(s, 1, 0)
    for b in src.boundaries:  # d of constants vanishes, but keep the check uniform
        if not vis_zero(b):
            raise ConsistencyError("F: nonzero exact 1-form")
    cols = []
    for r in src.reps:
        a = _split_total(n, 1, r)
        c01 = h01.coords(a.component(0, 1).to_vector(0, 1))
        c10 = h10.coords(a.component(1, 0).to_vector(1, 0))
        cols.append(tuple(c01) + tuple(c10))
    tdim = h01.dim + h10.dim
    M = Matrix.from_columns(cols, tdim) if cols else Matrix.zeros(tdim, 0)
    return MapData("F", M, mat_rank(M) if cols and tdim else 0, src.dim, tdim)


def map_P(s: StructureEquations) -> MapData:
    """P : H^{2n-2}_DR -> H_A^{n-1,n-1}, {Omega} -> [Omega^{n-1,n-1}]."""
    n = s.n
    src = de_rham_space(s, 2 * n - 2)
    dst = aeppli_space(s, n - 1, n - 1)

    def f(v):
        return _split_total(n, 2 * n - 2, v).component(n - 1, n - 1).to_vector(n - 1, n - 1)

    return _mapdata("P", induced_map(src, dst, f, "P"), src, dst)


# ---------------------------------------------------------------------------
# verdict and profile


@dataclass(frozen=True)
class SggVerdict:
    t_rank: int
    crit_bc: bool
    crit_betti: bool
    sgg: bool

    def as_dict(self) -> dict[str, Any]:
        return {"t_rank": self.t_rank, "crit_bc": self.crit_bc, "crit_betti": self.crit_betti, "sgg": self.sgg}


def is_unimodular(s: StructureEquations) -> bool:
    return _d(s, 2 * s.n - 1).is_zero()


def sgg_verdict(s: StructureEquations) -> SggVerdict:
    """T-vanishing, h^{0,1}_BC = h^{0,1} and b_1 = 2h^{0,1}, required to agree.

    Only unimodular algebras are accepted: the equivalences rely on the
    dualities that unimodularity provides at the invariant level.
    """
    if not is_unimodular(s):
        raise ValueError(f"{s.name or 'structure'} is not unimodular; the sGG criteria need a unimodular algebra")
    t_rank = map_T(s).rank
    h01 = hodge_number(s, 0, 1)
    crit_bc = bc_number(s, 0, 1) == h01
    crit_betti = betti(s, 1) == 2 * h01
    if not (crit_bc == crit_betti == (t_rank == 0)):
        raise ConsistencyError(
            f"sGG criteria disagree on {s.name!r}: rank T={t_rank}, crit_bc={crit_bc}, crit_betti={crit_betti}"
        )
    return SggVerdict(t_rank, crit_bc, crit_betti, t_rank == 0)


def _table(n: int, fn) -> list[list[int]]:
    return [[fn(p, q) for q in range(n + 1)] for p in range(n + 1)]


@dataclass(frozen=True)
class CohomologyProfile:
    name: str
    n: int
    betti: list[int]
    hodge: list[list[int]]
    bc: list[list[int]]
    aeppli: list[list[int]]
    e_pages: dict[int, list[list[int]]]
    degeneration_step: int
    map_ranks: dict[str, int]
    sgg: SggVerdict | None
    unimodular: bool
    nilpotent: bool
    caveats: list[str]

    def as_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "n": self.n,
            "betti": self.betti,
            "hodge": self.hodge,
            "bc": self.bc,
            "aeppli": self.aeppli,
            "e_pages": {str(r): page for r, page in sorted(self.e_pages.items())},
            "degeneration_step": self.degeneration_step,
            "map_ranks": dict(self.map_ranks),
            "sgg": self.sgg.as_dict() if self.sgg else None,
            "unimodular": self.unimodular,
            "nilpotent": self.nilpotent,
            "caveats": list(self.caveats),
        }


SOLVMANIFOLD_CAVEAT = (
    "solvable non-nilpotent algebra: invariant cohomology is computed; it need not equal "
    "the cohomology of a compact quotient"
)


def compute_profile(s: StructureEquations) -> CohomologyProfile:
    n = s.n
    report = validate(s)
    if not report.ok:
        from .structure import StructureError

        raise StructureError("not a Lie-algebra differential", report.violations)
    check_complex_identities(s)
    pages = froelicher_pages(s)
    hodge = _table(n, lambda p, q: hodge_number(s, p, q))
    b = [betti(s, k) for k in range(2 * n + 1)]
    if [[pages[1][(p, q)] for q in range(n + 1)] for p in range(n + 1)] != hodge:
        raise ConsistencyError("E_1 differs from Dolbeault cohomology")
    last = pages[max(pages)]
    for k in range(2 * n + 1):
        if sum(last[(p, k - p)] for p in range(n + 1) if 0 <= k - p <= n) != b[k]:
            raise ConsistencyError(f"E_infinity does not sum to b_{k}")
    caveats = []
    if not report.nilpotent:
        caveats.append(SOLVMANIFOLD_CAVEAT)
    unimodular = report.unimodular
    map_ranks: dict[str, int] = {}
    verdict = None
    if unimodular:
        verdict = sgg_verdict(s)
        ex = map_S_exactness(s)
        ex2 = map_Sstar_Tstar(s)
        if not (ex["exact"] and ex["surjective"] and ex2["exact"] and ex2["injective"]):
            raise ConsistencyError(f"exact sequences fail on {s.name!r}: {ex} {ex2}")
        F = map_F(s)
        if F.rank != b[1]:
            raise ConsistencyError("F is not injective")
        P = map_P(s)
        if verdict.sgg and P.rank != P.target_dim:
            raise ConsistencyError("P is not surjective on an sGG structure")
        map_ranks = {"T": ex["rank_T"], "S": ex["rank_S"], "S*": ex2["rank_Sstar"], "T*": ex2["rank_Tstar"], "F": F.rank, "P": P.rank}
    else:
        caveats.append("non-unimodular algebra: no lattice exists, sGG criteria and dualities are not evaluated")
    return CohomologyProfile(
        name=s.name,
        n=n,
        betti=b,
        hodge=hodge,
        bc=_table(n, lambda p, q: bc_number(s, p, q)),
        aeppli=_table(n, lambda p, q: aeppli_number(s, p, q)),
        e_pages={r: [[pg[(p, q)] for q in range(n + 1)] for p in range(n + 1)] for r, pg in pages.items()},
        degeneration_step=degeneration_step(pages),
        map_ranks=map_ranks,
        sgg=verdict,
        unimodular=unimodular,
        nilpotent=report.nilpotent,
        caveats=caveats,
    )


__all__ = [
    "CohomologyProfile",
    "ConsistencyError",
    "MapData",
    "Quotient",
    "SggVerdict",
    "aeppli_number",
    "aeppli_space",
    "bc_number",
    "bc_space",
    "betti",
    "check_complex_identities",
    "compute_profile",
    "ddbar_matrix",
    "de_rham_space",
    "degeneration_step",
    "del_space",
    "dolbeault_space",
    "e2_zigzag",
    "froelicher_pages",
    "hodge_number",
    "induced_map",
    "is_unimodular",
    "make_quotient",
    "map_F",
    "map_P",
    "map_S",
    "map_S_exactness",
    "map_Sstar",
    "map_Sstar_Tstar",
    "map_T",
    "map_Tstar",
    "sgg_verdict",
    "SOLVMANIFOLD_CAVEAT",
]
