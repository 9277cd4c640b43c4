"""Bigraded exterior algebra on a (1,0)-coframe eta^1..eta^n and its conjugates.

A monomial is a pair ``(holo, anti)`` of strictly increasing index tuples and
stands for ``eta^{holo} ^ conj(eta)^{anti}`` with every holomorphic factor to
the left of every antiholomorphic one.  Internally generators are labelled
``0..n-1`` (``eta^j``) and ``n..2n-1`` (``conj(eta^j)``); the canonical order of
a monomial is the sorted label order, and every product is brought back to it
while the permutation sign is tracked.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations, product
from math import comb
from typing import Iterable, Mapping

from .exactfield import ONE, ZERO, I, GaussianRational, Matrix, format_scalar, gr

Monomial = tuple[tuple[int, ...], tuple[int, ...]]


class BidegreeError(ValueError):
    pass


@lru_cache(maxsize=None)
def basis(n: int, p: int, q: int) -> tuple[Monomial, ...]:
    """Lexicographically ordered monomials spanning Lambda^{p,q}."""
    if not (0 <= p <= n and 0 <= q <= n):
        raise BidegreeError(f"bidegree ({p},{q}) out of range for n={n}")
    return tuple(product(combinations(range(1, n + 1), p), combinations(range(1, n + 1), q)))


@lru_cache(maxsize=None)
def basis_index(n: int, p: int, q: int) -> dict[Monomial, int]:
    return {m: k for k, m in enumerate(basis(n, p, q))}


def total_basis(n: int, k: int) -> tuple[Monomial, ...]:
    """Basis of Lambda^k ordered by increasing holomorphic degree p."""
    out: list[Monomial] = []
    for p in range(max(0, k - n), min(k, n) + 1):
        out.extend(basis(n, p, k - p))
    return tuple(out)


def _labels(n: int, m: Monomial) -> tuple[int, ...]:
    holo, anti = m
    return tuple(j - 1 for j in holo) + tuple(n + j - 1 for j in anti)


def _from_labels(n: int, labels: Iterable[int]) -> Monomial:
    holo = tuple(x + 1 for x in labels if x < n)
    anti = tuple(x - n + 1 for x in labels if x >= n)
    return holo, anti


def _sort_sign(seq: tuple[int, ...]) -> tuple[int, tuple[int, ...]]:
    """Sign of the sorting permutation, or 0 on a repeated entry."""
    if len(set(seq)) != len(seq):
        return 0, ()
    inv = 0
    for a in range(len(seq)):
        for b in range(a + 1, len(seq)):
            if seq[a] > seq[b]:
                inv += 1
    return (-1 if inv & 1 else 1), tuple(sorted(seq))


@lru_cache(maxsize=None)
def monomial_wedge(n: int, a: Monomial, b: Monomial) -> tuple[int, Monomial]:
    sign, labels = _sort_sign(_labels(n, a) + _labels(n, b))
    if sign == 0:
        return 0, ((), ())
    return sign, _from_labels(n, labels)


class Form:
    """Sparse element of the exterior algebra: monomial -> Q(i) coefficient."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping[Monomial, object] | None = None):
        self.n = n
        clean: dict[Monomial, GaussianRational] = {}
        for m, c in (terms or {}).items():
            c = gr(c)
            if not c.is_zero():
                holo, anti = m
                clean[(tuple(holo), tuple(anti))] = c
        self.terms = clean

    # -- constructors ----------------------------------------------------
    @classmethod
    def zero(cls, n: int) -> "Form":
        return cls(n)

    @classmethod
    def scalar(cls, n: int, c=1) -> "Form":
        return cls(n, {((), ()): c})

    @classmethod
    def eta(cls, n: int, j: int) -> "Form":
        return cls(n, {((j,), ()): ONE})

    @classmethod
    def eta_bar(cls, n: int, j: int) -> "Form":
        return cls(n, {((), (j,)): ONE})

    @classmethod
    def monomial(cls, n: int, holo: Iterable[int] = (), anti: Iterable[int] = (), coeff=1) -> "Form":
        """``coeff * eta^{holo[0]} ^ ... ^ conj(eta)^{anti[0]} ^ ...`` in the given factor order."""
        out = cls.scalar(n, coeff)
        for j in holo:
            out = out.wedge(cls.eta(n, j))
        for j in anti:
            out = out.wedge(cls.eta_bar(n, j))
        return out

    @classmethod
    def from_vector(cls, n: int, p: int, q: int, v) -> "Form":
        return cls(n, dict(zip(basis(n, p, q), v)))

    # -- structure -------------------------------------------------------
    def bidegrees(self) -> set[tuple[int, int]]:
        return {(len(h), len(a)) for h, a in self.terms}

    def degrees(self) -> set[int]:
        return {len(h) + len(a) for h, a in self.terms}

    def bidegree(self) -> tuple[int, int]:
        bd = self.bidegrees()
        if len(bd) != 1:
            raise BidegreeError(f"form is not of pure bidegree: {sorted(bd)}")
        return next(iter(bd))

    def is_mixed(self) -> bool:
        return len(self.bidegrees()) > 1

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, holo: Iterable[int], anti: Iterable[int] = ()) -> GaussianRational:
        return self.terms.get((tuple(holo), tuple(anti)), ZERO)

    def component(self, p: int, q: int) -> "Form":
        return Form(self.n, {m: c for m, c in self.terms.items() if len(m[0]) == p and len(m[1]) == q})

    def degree_part(self, k: int) -> "Form":
        return Form(self.n, {m: c for m, c in self.terms.items() if len(m[0]) + len(m[1]) == k})

    def to_vector(self, p: int, q: int) -> tuple[GaussianRational, ...]:
        idx = basis_index(self.n, p, q)
        v = [ZERO] * len(idx)
        for m, c in self.terms.items():
            if m not in idx:
                raise BidegreeError(f"term {m} is not of bidegree ({p},{q})")
            v[idx[m]] = c
        return tuple(v)

    def to_total_vector(self, k: int) -> tuple[GaussianRational, ...]:
        tb = total_basis(self.n, k)
        idx = {m: j for j, m in enumerate(tb)}
        v = [ZERO] * len(tb)
        for m, c in self.terms.items():
            if m not in idx:
                raise BidegreeError(f"term {m} is not of degree {k}")
            v[idx[m]] = c
        return tuple(v)

    @classmethod
    def from_total_vector(cls, n: int, k: int, v) -> "Form":
        return cls(n, dict(zip(total_basis(n, k), v)))

    # -- algebra ---------------------------------------------------------
    def _check(self, other: "Form") -> None:
        if not isinstance(other, Form) or other.n != self.n:
            raise ValueError("forms live on different algebras")

    def __add__(self, other: "Form") -> "Form":
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, ZERO) + c
        return Form(self.n, out)

    def __sub__(self, other: "Form") -> "Form":
        return self + (-other)

    def __neg__(self) -> "Form":
        return Form(self.n, {m: -c for m, c in self.terms.items()})

    def scale(self, c) -> "Form":
        c = gr(c)
        return Form(self.n, {m: c * x for m, x in self.terms.items()})

    def __rmul__(self, c) -> "Form":
        return self.scale(c)

    def wedge(self, other: "Form") -> "Form":
        self._check(other)
        out: dict[Monomial, GaussianRational] = {}
        n = self.n
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                sign, m = monomial_wedge(n, ma, mb)
                if sign == 0:
                    continue
                c = ca * cb
                out[m] = out.get(m, ZERO) + (c if sign > 0 else -c)
        return Form(n, out)

    __xor__ = wedge

    def conjugate(self) -> "Form":
        out = {}
        for (holo, anti), c in self.terms.items():
            # conj moves q antiholomorphic factors in front of p holomorphic ones
            sign = -1 if (len(holo) * len(anti)) % 2 else 1
            out[(anti, holo)] = c.conj() if sign > 0 else -c.conj()
        return Form(self.n, out)

    def is_real(self) -> bool:
        return self == self.conjugate()

    def __eq__(self, other):
        if not isinstance(other, Form):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def __repr__(self):
        return f"Form(n={self.n}, {render_form(self)})"

    def __str__(self):
        return render_form(self)


def wedge(a: Form, b: Form) -> Form:
    return a.wedge(b)


def conjugate_form(a: Form) -> Form:
    return a.conjugate()


def component(a: Form, p: int, q: int) -> Form:
    return a.component(p, q)


def wedge_power(a: Form, k: int) -> Form:
    if k < 0:
        raise ValueError("negative exponent")
    out = Form.scalar(a.n, 1)
    for _ in range(k):
        out = out.wedge(a)
    return out


def render_monomial(m: Monomial) -> str:
    holo, anti = m
    if not holo and not anti:
        return "1"
    h = ",".join(map(str, holo))
    a = ",".join(f"{j}̄" for j in anti)
    if holo and anti:
        return f"η^{{{h}|{a}}}"
    return f"η^{{{h or a}}}" if holo else f"η^{{|{a}}}"


def render_form(a: Form) -> str:
    if a.is_zero():
        return "0"
    parts = []
    for m in sorted(a.terms, key=lambda m: (len(m[0]) + len(m[1]), len(m[0]), m)):
        c = a.terms[m]
        cs = format_scalar(c)
        mono = render_monomial(m)
        if mono == "1":
            parts.append(cs)
        elif cs == "1":
            parts.append(mono)
        elif cs == "-1":
            parts.append("-" + mono)
        elif c.is_real():
            parts.append(f"{cs}{mono}")
        else:
            parts.append(f"({cs}){mono}")
    s = " + ".join(parts)
    return s.replace("+ -", "- ")


# ---------------------------------------------------------------------------
# Hermitian-matrix correspondences


def volume_coefficient(n: int) -> GaussianRational:
    """Coefficient ``c`` with ``(i eta^{1 1bar}) ^ ... ^ (i eta^{n nbar}) = c * eta^{1..n|1..n}``."""
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return I**n * sign


def integrate(a: Form) -> GaussianRational:
    """Coefficient on the calibrated positive volume form (total volume 1)."""
    top = ((tuple(range(1, a.n + 1))), tuple(range(1, a.n + 1)))
    return a.terms.get(top, ZERO) / volume_coefficient(a.n)


def hermitian_matrix_of_11(a: Form) -> Matrix:
    """``H`` with ``a = i * sum H[j,k] eta^j ^ conj(eta^k)``."""
    if not a.is_zero() and a.bidegrees() != {(1, 1)}:
        raise BidegreeError("expected a (1,1)-form")
    n = a.n
    minus_i = -I
    return Matrix([[a.coefficient((j,), (k,)) * minus_i for k in range(1, n + 1)] for j in range(1, n + 1)], n)


def form_of_hermitian_11(n: int, H: Matrix) -> Form:
    return Form(n, {((j + 1,), (k + 1,)): I * H[j, k] for j in range(n) for k in range(n)})


def hermitian_matrix_of_n1n1(a: Form) -> Matrix:
    """``H[j,k]`` with ``a ^ (i eta^j ^ conj(eta^k)) = H[j,k] * vol``."""
    n = a.n
    if not a.is_zero() and a.bidegrees() != {(n - 1, n - 1)}:
        raise BidegreeError(f"expected an ({n-1},{n-1})-form")
    rows = []
    for j in range(1, n + 1):
        row = []
        for k in range(1, n + 1):
            row.append(integrate(a.wedge(Form(n, {((j,), (k,)): I}))))
        rows.append(row)
    return Matrix(rows, n)


@lru_cache(maxsize=None)
def _n1n1_matrix_map(n: int) -> tuple[Matrix, Matrix]:
    """Linear map coordinates(n-1,n-1) -> flattened H, and its inverse."""
    B = basis(n, n - 1, n - 1)
    cols = []
    for m in B:
        H = hermitian_matrix_of_n1n1(Form(n, {m: ONE}))
        cols.append(tuple(x for r in H.rows for x in r))
    from .exactfield import inverse

    M = Matrix.from_columns(cols, n * n)
    return M, inverse(M)


def form_of_hermitian_n1n1(n: int, H: Matrix) -> Form:
    """Inverse of :func:`hermitian_matrix_of_n1n1`."""
    _, Minv = _n1n1_matrix_map(n)
    v = Minv.apply(tuple(x for r in H.rows for x in r))
    return Form.from_vector(n, n - 1, n - 1, v)


def standard_metric(n: int, scale=1) -> Form:
    """``scale * i * sum_j eta^{j jbar}``."""
    return Form(n, {((j,), (j,)): I * gr(scale) for j in range(1, n + 1)})


def diagonal_metric(n: int, weights) -> Form:
    return Form(n, {((j + 1,), (j + 1,)): I * gr(w) for j, w in enumerate(weights)})


def alternating_dimension_sum(n: int) -> int:
    return sum((-1) ** (p + q) * comb(n, p) * comb(n, q) for p in range(n + 1) for q in range(n + 1))
