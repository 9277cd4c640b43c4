"""Exact arithmetic over the Gaussian rationals Q(i) and dense linear algebra.

Scalars are :class:`GaussianRational` values stored as ``(a + b*i) / d`` with
integers ``a, b, d`` (``d > 0``, ``gcd(a, b, d) == 1``).  Vectors are tuples of
scalars, matrices are :class:`Matrix` instances with row tuples.

Rank is computed by fraction-free (Bareiss) elimination over the Gaussian
integers after clearing denominators row by row; kernels and solves go
through a reduced row echelon form computed with field arithmetic.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence


class FieldError(ArithmeticError):
    pass


class GaussianRational:
    """An element ``(a + b i) / d`` of Q(i)."""

    __slots__ = ("_a", "_b", "_d")

    def __init__(self, re=0, im=0):
        re = Fraction(re)
        im = Fraction(im)
        d = re.denominator * im.denominator // gcd(re.denominator, im.denominator)
        self._set(re.numerator * (d // re.denominator), im.numerator * (d // im.denominator), d)

    def _set(self, a: int, b: int, d: int) -> None:
        if d < 0:
            a, b, d = -a, -b, -d
        g = gcd(gcd(a, b), d)
        if g > 1:
            a //= g
            b //= g
            d //= g
        if a == 0 and b == 0:
            d = 1
        self._a, self._b, self._d = a, b, d

    @classmethod
    def _raw(cls, a: int, b: int, d: int) -> "GaussianRational":
        obj = cls.__new__(cls)
        obj._set(a, b, d)
        return obj

    # -- accessors -------------------------------------------------------
    @property
    def re(self) -> Fraction:
        return Fraction(self._a, self._d)

    @property
    def im(self) -> Fraction:
        return Fraction(self._b, self._d)

    def parts(self) -> tuple[int, int, int]:
        return self._a, self._b, self._d

    def is_zero(self) -> bool:
        return self._a == 0 and self._b == 0

    def is_real(self) -> bool:
        return self._b == 0

    def conj(self) -> "GaussianRational":
        return GaussianRational._raw(self._a, -self._b, self._d)

    def abs2(self) -> Fraction:
        """``|z|^2`` as an exact rational."""
        return Fraction(self._a * self._a + self._b * self._b, self._d * self._d)

    # -- arithmetic ------------------------------------------------------
    @staticmethod
    def _coerce(x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, (int, Fraction)):
            return GaussianRational(x)
        if isinstance(x, complex):
            raise TypeError("floating complex numbers are not exact; use GaussianRational")
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GaussianRational._raw(
            self._a * o._d + o._a * self._d, self._b * o._d + o._b * self._d, self._d * o._d
        )

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational._raw(-self._a, -self._b, self._d)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GaussianRational._raw(
            self._a * o._d - o._a * self._d, self._b * o._d - o._b * self._d, self._d * o._d
        )

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GaussianRational._raw(
            self._a * o._a - self._b * o._b, self._a * o._b + self._b * o._a, self._d * o._d
        )

    __rmul__ = __mul__

    def inverse(self) -> "GaussianRational":
        n = self._a * self._a + self._b * self._b
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(i)")
        # d / (a + bi) = d (a - bi) / (a^2 + b^2)
        return GaussianRational._raw(self._d * self._a, -self._d * self._b, n)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = ONE
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- comparison / hashing -------------------------------------------
    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self._a == o._a and self._b == o._b and self._d == o._d

    def __hash__(self):
        if self._b == 0:
            return hash(Fraction(self._a, self._d))
        return hash((self._a, self._b, self._d))

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        return f"GaussianRational({self})"

    def __str__(self):
        return format_scalar(self)


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
I = GaussianRational(0, 1)


def _frac_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def format_scalar(z: GaussianRational) -> str:
    """Canonical text form: ``a/b``, ``a/b+c/d*i``, ``-i`` ... (no spaces)."""
    re, im = z.re, z.im
    if im == 0:
        return _frac_str(re)
    if im == 1:
        ims = "i"
    elif im == -1:
        ims = "-i"
    else:
        ims = _frac_str(im) + "*i"
    if re == 0:
        return ims
    sep = "" if ims.startswith("-") else "+"
    return _frac_str(re) + sep + ims


def gr(x) -> GaussianRational:
    """Coerce ints, Fractions, canonical strings or pairs into Q(i)."""
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, (int, Fraction)):
        return GaussianRational(x)
    if isinstance(x, tuple) and len(x) == 2:
        return GaussianRational(x[0], x[1])
    if isinstance(x, str):
        from .coeffexpr import parse_scalar

        return parse_scalar(x)
    raise TypeError(f"cannot interpret {x!r} as a Gaussian rational")


def field_arith(a: GaussianRational, b: GaussianRational | None, op: str) -> GaussianRational:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if b is None or b.is_zero():
            raise FieldError("division by zero")
        return a / b
    if op == "conj":
        return a.conj()
    raise ValueError(f"unknown operation {op!r}")


# ---------------------------------------------------------------------------
# vectors

Vector = tuple


def vzero(n: int) -> Vector:
    return (ZERO,) * n


def vadd(u: Sequence, v: Sequence) -> Vector:
    return tuple(x + y for x, y in zip(u, v))


def vsub(u: Sequence, v: Sequence) -> Vector:
    return tuple(x - y for x, y in zip(u, v))


def vscale(c, v: Sequence) -> Vector:
    c = gr(c)
    return tuple(c * x for x in v)


def vconj(v: Sequence) -> Vector:
    return tuple(x.conj() for x in v)


def vis_zero(v: Sequence) -> bool:
    return all(x.is_zero() for x in v)


def unit_vector(n: int, k: int) -> Vector:
    return tuple(ONE if j == k else ZERO for j in range(n))


# ---------------------------------------------------------------------------
# matrices


class Matrix:
    """Dense matrix over Q(i); immutable by convention."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Iterable], ncols: int | None = None):
        self.rows = tuple(tuple(x if type(x) is GaussianRational else gr(x) for x in r) for r in rows)
        self.nrows = len(self.rows)
        if ncols is None:
            if not self.rows:
                raise ValueError("ncols is required for a matrix with no rows")
            ncols = len(self.rows[0])
        self.ncols = ncols
        for r in self.rows:
            if len(r) != ncols:
                raise ValueError("ragged matrix")

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "Matrix":
        return cls([[ZERO] * ncols for _ in range(nrows)], ncols)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls([unit_vector(n, k) for k in range(n)], n)

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence], nrows: int) -> "Matrix":
        return cls([[c[i] for c in cols] for i in range(nrows)], len(cols))

    @classmethod
    def diag(cls, entries: Sequence) -> "Matrix":
        n = len(entries)
        return cls([[entries[i] if i == j else ZERO for j in range(n)] for i in range(n)], n)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list[Vector]:
        return [self.column(j) for j in range(self.ncols)]

    @property
    def T(self) -> "Matrix":
        return Matrix([self.column(j) for j in range(self.ncols)], self.nrows)

    @property
    def H(self) -> "Matrix":
        """Conjugate transpose."""
        return Matrix([[x.conj() for x in self.column(j)] for j in range(self.ncols)], self.nrows)

    def conj(self) -> "Matrix":
        return Matrix([[x.conj() for x in r] for r in self.rows], self.ncols)

    def apply(self, v: Sequence) -> Vector:
        if len(v) != self.ncols:
            raise ValueError(f"dimension mismatch: {self.ncols} columns, vector of length {len(v)}")
        out = []
        for r in self.rows:
            acc = ZERO
            for x, y in zip(r, v):
                if x._a or x._b:
                    if y._a or y._b:
                        acc = acc + x * y
            out.append(acc)
        return tuple(out)

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise ValueError("dimension mismatch in matrix product")
            cols = [self.apply(c) for c in other.columns()]
            return Matrix.from_columns(cols, self.nrows) if cols else Matrix([[] for _ in range(self.nrows)], 0)
        return self.apply(other)

    def __add__(self, other: "Matrix") -> "Matrix":
        return Matrix([vadd(r, s) for r, s in zip(self.rows, other.rows)], self.ncols)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return Matrix([vsub(r, s) for r, s in zip(self.rows, other.rows)], self.ncols)

    def __neg__(self) -> "Matrix":
        return Matrix([tuple(-x for x in r) for r in self.rows], self.ncols)

    def scale(self, c) -> "Matrix":
        return Matrix([vscale(c, r) for r in self.rows], self.ncols)

    def is_zero(self) -> bool:
        return all(vis_zero(r) for r in self.rows)

    def is_hermitian(self) -> bool:
        return self.nrows == self.ncols and self == self.H

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix([[self.rows[i][j] for j in cols] for i in rows], len(cols))

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash((self.shape, self.rows))

    def __repr__(self):
        body = "; ".join(", ".join(map(str, r)) for r in self.rows)
        return f"Matrix({self.nrows}x{self.ncols}: [{body}])"

    def to_strings(self) -> list[list[str]]:
        return [[str(x) for x in r] for r in self.rows]


def vstack(*ms: Matrix) -> Matrix:
    ncols = ms[0].ncols
    rows = []
    for m in ms:
        if m.ncols != ncols:
            raise ValueError("vstack column mismatch")
        rows.extend(m.rows)
    return Matrix(rows, ncols)


def hstack(*ms: Matrix) -> Matrix:
    nrows = ms[0].nrows
    return Matrix([sum((m.rows[i] for m in ms), ()) for i in range(nrows)], sum(m.ncols for m in ms))


# ---------------------------------------------------------------------------
# elimination


def _gauss_int_rows(rows: Sequence[Sequence[GaussianRational]]) -> list[list[tuple[int, int]]]:
    """Scale each row by the lcm of its denominators -> Gaussian integer rows."""
    out = []
    for r in rows:
        L = 1
        for x in r:
            L = L * x._d // gcd(L, x._d)
        out.append([(x._a * (L // x._d), x._b * (L // x._d)) for x in r])
    return out


def _gi_mul(x, y):
    return (x[0] * y[0] - x[1] * y[1], x[0] * y[1] + x[1] * y[0])


def _gi_exact_div(x, y):
    n = y[0] * y[0] + y[1] * y[1]
    re = x[0] * y[0] + x[1] * y[1]
    im = x[1] * y[0] - x[0] * y[1]
    q_re, r_re = divmod(re, n)
    q_im, r_im = divmod(im, n)
    if r_re or r_im:
        raise FieldError("inexact Bareiss division (internal error)")
    return (q_re, q_im)


def mat_rank(M: Matrix) -> int:
    """Exact rank by fraction-free Bareiss elimination over Z[i]."""
    if M.nrows == 0 or M.ncols == 0:
        return 0
    a = _gauss_int_rows(M.rows)
    nr, nc = M.nrows, M.ncols
    prev = (1, 0)
    rank = 0
    for c in range(nc):
        piv = None
        for r in range(rank, nr):
            if a[r][c] != (0, 0):
                piv = r
                break
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        p = a[rank][c]
        for r in range(rank + 1, nr):
            arc = a[r][c]
            row_r, row_k = a[r], a[rank]
            for j in range(c + 1, nc):
                t1 = _gi_mul(p, row_r[j])
                t2 = _gi_mul(arc, row_k[j])
                row_r[j] = _gi_exact_div((t1[0] - t2[0], t1[1] - t2[1]), prev)
            row_r[c] = (0, 0)
        prev = p
        rank += 1
        if rank == nr:
            break
    return rank


def rref(M: Matrix) -> tuple[list[list[GaussianRational]], list[int]]:
    """Reduced row echelon form (nonzero rows only) and pivot columns."""
    rows = [list(r) for r in M.rows]
    pivots: list[int] = []
    r0 = 0
    for c in range(M.ncols):
        piv = None
        for r in range(r0, len(rows)):
            if not rows[r][c].is_zero():
                piv = r
                break
        if piv is None:
            continue
        rows[r0], rows[piv] = rows[piv], rows[r0]
        inv = rows[r0][c].inverse()
        rows[r0] = [x * inv for x in rows[r0]]
        prow = rows[r0]
        for r in range(len(rows)):
            if r != r0:
                f = rows[r][c]
                if not f.is_zero():
                    rows[r] = [x - f * y if not y.is_zero() else x for x, y in zip(rows[r], prow)]
        pivots.append(c)
        r0 += 1
        if r0 == len(rows):
            break
    return rows[: len(pivots)], pivots


def mat_kernel(M: Matrix) -> list[Vector]:
    """Basis of ``{v : M v = 0}`` (one vector per free column)."""
    R, pivots = rref(M)
    n = M.ncols
    free = [j for j in range(n) if j not in set(pivots)]
    basis = []
    for f in free:
        v = [ZERO] * n
        v[f] = ONE
        for row, p in zip(R, pivots):
            v[p] = -row[f]
        basis.append(tuple(v))
    return basis


def mat_solve(M: Matrix, y: Sequence) -> Vector | None:
    """A solution of ``M x = y`` or ``None`` when ``y`` is outside the column space."""
    if len(y) != M.nrows:
        raise ValueError("right-hand side has the wrong length")
    aug = hstack(M, Matrix([[v] for v in y], 1)) if M.nrows else Matrix([], M.ncols + 1)
    R, pivots = rref(aug)
    if pivots and pivots[-1] == M.ncols:
        return None
    x = [ZERO] * M.ncols
    for row, p in zip(R, pivots):
        x[p] = row[M.ncols]
    x = tuple(x)
    if M.apply(x) != tuple(gr(v) for v in y):
        raise FieldError("solve verification failed (internal error)")
    return x


def independent_subset(vectors: Sequence[Vector]) -> list[int]:
    """Indices of a maximal linearly independent subset, greedily from the front."""
    if not vectors:
        return []
    _, pivots = rref(Matrix.from_columns(list(vectors), len(vectors[0])))
    return pivots


def span_basis(vectors: Sequence[Vector]) -> list[Vector]:
    return [vectors[i] for i in independent_subset(vectors)]


def subspace_sum_dim(A: Sequence[Vector], B: Sequence[Vector]) -> int:
    vecs = list(A) + list(B)
    if not vecs:
        return 0
    return mat_rank(Matrix(vecs))


def in_span(v: Vector, W: Sequence[Vector]) -> bool:
    if not W:
        return vis_zero(v)
    return mat_solve(Matrix.from_columns(list(W), len(v)), v) is not None


def inverse(M: Matrix) -> Matrix:
    n = M.nrows
    if n != M.ncols:
        raise ValueError("inverse of a non-square matrix")
    if n == 0:
        return M
    R, pivots = rref(hstack(M, Matrix.identity(n)))
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise FieldError("matrix is singular")
    return Matrix([row[n:] for row in R], n)


def det(M: Matrix) -> GaussianRational:
    n = M.nrows
    if n != M.ncols:
        raise ValueError("determinant of a non-square matrix")
    rows = [list(r) for r in M.rows]
    result = ONE
    for c in range(n):
        piv = next((r for r in range(c, n) if not rows[r][c].is_zero()), None)
        if piv is None:
            return ZERO
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            result = -result
        p = rows[c][c]
        result = result * p
        inv = p.inverse()
        for r in range(c + 1, n):
            f = rows[r][c] * inv
            if not f.is_zero():
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[c])]
    return result


def hermitian_form(G: Matrix, x: Sequence, y: Sequence) -> GaussianRational:
    """``<x, y>_G = y^H G x`` (linear in the first slot, conjugate-linear in the second)."""
    Gx = G.apply(x)
    acc = ZERO
    for a, b in zip(y, Gx):
        acc = acc + a.conj() * b
    return acc


def orth_project(v: Sequence, W: Sequence[Vector], G: Matrix) -> Vector:
    """G-orthogonal projection of ``v`` onto ``span W``."""
    if not is_pos_def_hermitian(G):
        raise FieldError("Gram matrix is not positive definite")
    v = tuple(gr(x) for x in v)
    if not W:
        return vzero(len(v))
    W = span_basis(list(W))
    k = len(W)
    # Solve sum_j c_j <w_j, w_i> = <v, w_i>.
    gram = Matrix([[hermitian_form(G, W[j], W[i]) for j in range(k)] for i in range(k)], k)
    rhs = tuple(hermitian_form(G, v, W[i]) for i in range(k))
    c = mat_solve(gram, rhs)
    out = vzero(len(v))
    for cj, wj in zip(c, W):
        out = vadd(out, vscale(cj, wj))
    resid = vsub(v, out)
    if any(not hermitian_form(G, resid, w).is_zero() for w in W):
        raise FieldError("projection residual not orthogonal (internal error)")
    return out


def _require_hermitian(H: Matrix) -> None:
    if not H.is_hermitian():
        raise FieldError("matrix is not Hermitian")


def leading_minors(H: Matrix) -> list[Fraction]:
    _require_hermitian(H)
    out = []
    for k in range(1, H.nrows + 1):
        m = det(H.submatrix(range(k), range(k)))
        out.append(m.re)
    return out


def is_pos_def_hermitian(H: Matrix) -> bool:
    """Sylvester's criterion: all leading principal minors are > 0."""
    return all(m > 0 for m in leading_minors(H))


def is_psd_hermitian(H: Matrix) -> bool:
    """Every principal minor (all index subsets) is >= 0."""
    from itertools import combinations

    _require_hermitian(H)
    n = H.nrows
    for k in range(1, n + 1):
        for idx in combinations(range(n), k):
            if det(H.submatrix(idx, idx)).re < 0:
                return False
    return True
