"""Matrix algebra over finite rings.

Multiplication, big-exponent powers, general-linear-group cardinality,
inverse via the |GL| power trick, and an exact characteristic polynomial
over Galois rings through the Csanky/Newton recursion lifted to Z[X]/(F).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import InternalError, InvalidParameter, PreconditionViolation, UnsupportedRing
from .ring import FiniteRing, RingElement
from .structure import (
    decompose_local,
    galois_representation,
    is_galois_ring,
    is_local,
    residue_field_size,
)


class Matrix:
    """A finitely indexed matrix over a ring; entries stored sparsely."""

    def __init__(self, ring: FiniteRing, rows: Sequence, cols: Sequence, entries: Mapping):
        if not rows or not cols:
            raise InvalidParameter("matrix index sets must be non-empty")
        self.ring = ring
        self.rows = list(dict.fromkeys(rows))
        self.cols = list(dict.fromkeys(cols))
        row_set, col_set = set(self.rows), set(self.cols)
        zero = ring.zero.index
        self.entries: dict = {}
        for (i, j), v in entries.items():
            if i not in row_set or j not in col_set:
                raise InvalidParameter(f"entry ({i!r},{j!r}) outside the index sets")
            if isinstance(v, RingElement):
                if v.ring is not ring:
                    raise InvalidParameter("entry from a different ring")
                v = v.index
            if not isinstance(v, int) or not 0 <= v < ring.size:
                raise InvalidParameter(f"bad entry value {v!r}")
            if v != zero:
                self.entries[(i, j)] = v

    @staticmethod
    def identity(ring: FiniteRing, ids: Sequence) -> "Matrix":
        one = ring.one.index
        return Matrix(ring, ids, ids, {(i, i): one for i in ids})

    def entry_idx(self, i, j) -> int:
        return self.entries.get((i, j), self.ring.zero.index)

    def entry(self, i, j) -> RingElement:
        return self.ring.element(self.entry_idx(i, j))

    def is_square(self) -> bool:
        return set(self.rows) == set(self.cols)

    def same_shape(self, other: "Matrix") -> bool:
        return set(self.rows) == set(other.rows) and set(self.cols) == set(other.cols)

    def equals(self, other: "Matrix") -> bool:
        if self.ring is not other.ring or not self.same_shape(other):
            return False
        return all(
            self.entry_idx(i, j) == other.entry_idx(i, j)
            for i in self.rows
            for j in self.cols
        )

    def __repr__(self):
        return f"Matrix({self.ring.spec}, {len(self.rows)}x{len(self.cols)})"


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    if a.ring is not b.ring or not a.same_shape(b):
        raise InvalidParameter("matrix addition requires matching index sets and ring")
    ring = a.ring
    entries = {}
    for i in a.rows:
        for j in a.cols:
            v = ring.add_idx(a.entry_idx(i, j), b.entry_idx(i, j))
            if v != ring.zero.index:
                entries[(i, j)] = v
    return Matrix(ring, a.rows, a.cols, entries)


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    """(AB)(i,j) = sum_k A(i,k)·B(k,j); inner index sets must coincide."""
    if a.ring is not b.ring:
        raise InvalidParameter("matrix product requires a common ring")
    if set(a.cols) != set(b.rows):
        raise InvalidParameter("inner index sets do not match")
    ring = a.ring
    entries = {}
    b_by_row: dict = {}
    for (k, j), v in b.entries.items():
        b_by_row.setdefault(k, []).append((j, v))
    for i in a.rows:
        acc: dict = {}
        for k in a.cols:
            av = a.entries.get((i, k))
            if av is None:
                continue
            for j, bv in b_by_row.get(k, ()):
                prod = ring.mul_idx(av, bv)
                if prod != ring.zero.index:
                    prev = acc.get(j)
                    acc[j] = prod if prev is None else ring.add_idx(prev, prod)
        for j, v in acc.items():
            if v != ring.zero.index:
                entries[(i, j)] = v
    return Matrix(ring, a.rows, b.cols, entries)


def mat_pow(a: Matrix, e: int) -> Matrix:
    """A^e by repeated squaring; exponents are arbitrary-precision integers."""
    if not a.is_square():
        raise InvalidParameter("matrix power requires a square matrix")
    if e < 0:
        raise InvalidParameter("negative matrix exponent")
    result = Matrix.identity(a.ring, a.rows)
    base = a
    while e:
        if e & 1:
            result = mat_mul(result, base)
        base = mat_mul(base, base)
        e >>= 1
    return result


def mat_scale(c: RingElement, a: Matrix) -> Matrix:
    ring = a.ring
    entries = {}
    for key, v in a.entries.items():
        prod = ring.mul_idx(c.index, v)
        if prod != ring.zero.index:
            entries[key] = prod
    return Matrix(ring, a.rows, a.cols, entries)


# ---------------------------------------------------------------------------
# general linear group cardinality


def gl_order_local(ring: FiniteRing, n: int) -> int:
    """|GL_n(R)| = |m|^(n^2) · prod_{i<n}(q^n - q^i) for a local ring."""
    if n < 1:
        raise InvalidParameter("matrix dimension must be >= 1")
    if not ring.commutative or not is_local(ring):
        raise PreconditionViolation(f"{ring.spec} is not a local ring")
    q = residue_field_size(ring)
    m_size = ring.size // q
    return m_size ** (n * n) * math.prod(q**n - q**i for i in range(n))


def gl_order(ring: FiniteRing, n: int) -> int:
    """|GL_n(R)| over a commutative ring: product over the local summands."""
    if not ring.commutative:
        raise PreconditionViolation("gl_order requires a commutative ring")
    return math.prod(gl_order_local(s.ring, n) for s in decompose_local(ring))


# ---------------------------------------------------------------------------
# inverse


def _project_matrix(a: Matrix, summand) -> Matrix:
    entries = {key: summand.project(v) for key, v in a.entries.items()}
    return Matrix(summand.ring, a.rows, a.cols, entries)


def inverse(a: Matrix) -> Matrix | None:
    """A^(-1) via A^(|GL|-1) on each local summand; None when singular."""
    if not a.ring.commutative:
        raise PreconditionViolation("inverse requires a commutative ring")
    if not a.is_square():
        raise InvalidParameter("inverse requires a square matrix")
    ring = a.ring
    n = len(a.rows)
    combined: dict = {}
    for summand in decompose_local(ring):
        a_e = _project_matrix(a, summand)
        ell = gl_order_local(summand.ring, n)
        b_e = mat_pow(a_e, ell - 1)
        product = mat_mul(a_e, b_e)
        if not product.equals(Matrix.identity(summand.ring, a.rows)):
            return None
        for key, v in b_e.entries.items():
            combined[key] = ring.add_idx(combined.get(key, ring.zero.index), summand.embed(v))
    return Matrix(ring, a.rows, a.cols, combined)


def is_invertible(a: Matrix) -> bool:
    return inverse(a) is not None


# ---------------------------------------------------------------------------
# characteristic polynomial over Galois rings


@dataclass
class CharPoly:
    """Monic characteristic polynomial; coefficients c_0..c_n, lowest first."""

    ring: FiniteRing
    coefficients: list[RingElement]

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def coefficient(self, k: int) -> RingElement:
        return self.coefficients[k]

    def evaluate_at_matrix(self, a: Matrix) -> Matrix:
        """chi(A), for Cayley-Hamilton checks."""
        result = Matrix(a.ring, a.rows, a.cols, {})
        power = Matrix.identity(a.ring, a.rows)
        for k, c in enumerate(self.coefficients):
            result = mat_add(result, mat_scale(c, power))
            if k < self.degree:
                power = mat_mul(power, a)
        return result

    def equals(self, other: "CharPoly") -> bool:
        return self.ring is other.ring and [c.index for c in self.coefficients] == [
            c.index for c in other.coefficients
        ]

    def __repr__(self):
        names = [c.name for c in self.coefficients]
        return "CharPoly(" + ", ".join(f"c{k}={v}" for k, v in enumerate(names)) + ")"


def _int_poly_mul_mod(a: Sequence[int], b: Sequence[int], f: Sequence[int]) -> tuple[int, ...]:
    """Product in Z[X]/(F) with F monic; exact integer arithmetic."""
    r = len(f) - 1
    prod = [0] * (max(len(a) + len(b) - 1, r))
    for s, x in enumerate(a):
        if x:
            for t, y in enumerate(b):
                prod[s + t] += x * y
    for k in range(len(prod) - 1, r - 1, -1):
        c = prod[k]
        if c:
            for t in range(r):
                prod[k - r + t] -= c * f[t]
            prod[k] = 0
    return tuple(prod[:r])


def _int_poly_add(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    return tuple(x + y for x, y in zip(a, b))


def charpoly_galois(a: Matrix) -> CharPoly:
    """Characteristic polynomial over a Galois ring, exactly.

    Entries are lifted through the Galois representation to Z[X]/(F) with F
    the integer lift of the Galois polynomial, the Newton trace recursion
    c_k = -(1/k)(s_k + sum_{0<j<k} c_j s_{k-j}) runs over exact rationals
    (every division must clear its denominator), and the integer output is
    reduced mod p^n and mapped back through the representation.
    """
    ring = a.ring
    if is_galois_ring(ring) is None:
        raise PreconditionViolation(f"{ring.spec} is not a Galois ring")
    if not a.is_square():
        raise InvalidParameter("characteristic polynomial requires a square matrix")
    rep = galois_representation(ring)
    f = [int(c) for c in rep.f.coeffs]
    r = rep.r
    q = rep.q
    ids = list(a.rows)
    n = len(ids)
    zero_poly = (0,) * r
    lifted = [
        [tuple(int(c) for c in rep.iota[a.entry_idx(i, j)]) for j in ids]
        for i in ids
    ]

    def pmul(x, y):
        return _int_poly_mul_mod(x, y, f)

    def mat_product(m1, m2):
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = zero_poly
                for k in range(n):
                    if m1[i][k] != zero_poly and m2[k][j] != zero_poly:
                        acc = _int_poly_add(acc, pmul(m1[i][k], m2[k][j]))
                row.append(acc)
            out.append(row)
        return out

    traces = []
    power = lifted
    for _ in range(n):
        trace = zero_poly
        for i in range(n):
            trace = _int_poly_add(trace, power[i][i])
        traces.append(trace)
        power = mat_product(power, lifted)
    # Newton recursion: c[k] is the coefficient of X^(n-k)
    coeffs_by_drop: list[tuple[int, ...]] = [(1,) + (0,) * (r - 1)]
    for k in range(1, n + 1):
        acc = list(traces[k - 1])
        for j in range(1, k):
            term = pmul(coeffs_by_drop[j], traces[k - j - 1])
            acc = [x + y for x, y in zip(acc, term)]
        ck = []
        for v in acc:
            frac = Fraction(-v, k)
            if frac.denominator != 1:
                raise InternalError(
                    f"Newton recursion produced denominator {frac.denominator} at step {k}"
                )
            ck.append(int(frac))
        coeffs_by_drop.append(tuple(ck))
    coefficients = []
    for power_of_x in range(n + 1):
        ck = coeffs_by_drop[n - power_of_x]
        coefficients.append(rep.from_poly([c % q for c in ck]))
    return CharPoly(ring=ring, coefficients=coefficients)


def determinant(a: Matrix) -> RingElement:
    """det(A) = (-1)^|I| · chi_A(0), recombined over the local summands.

    Every local summand must be a Galois ring (all Z/m qualify).
    """
    ring = a.ring
    if not ring.commutative:
        raise PreconditionViolation("determinant requires a commutative ring")
    if not a.is_square():
        raise InvalidParameter("determinant requires a square matrix")
    n = len(a.rows)
    total = ring.zero.index
    for summand in decompose_local(ring):
        sub = summand.ring
        if is_galois_ring(sub) is None:
            raise UnsupportedRing(
                f"local summand {sub.spec} is not a Galois ring; determinant undefined here"
            )
        chi = charpoly_galois(_project_matrix(a, summand))
        det_idx = chi.coefficients[0].index
        if n % 2 == 1:
            det_idx = sub.neg_idx(det_idx)
        total = ring.add_idx(total, summand.embed(det_idx))
    return ring.element(total)
