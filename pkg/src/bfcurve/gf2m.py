"""Exact arithmetic in GF(2^m) with an explicit reduction polynomial.

Field elements are plain ints: bit i of the mask is the coefficient of X^i
in the residue class modulo the reduction polynomial, so addition is xor and
the zero/one elements are 0 and 1.  A :class:`Field` carries m and the
reduction polynomial and offers

* scalar operations on int masks (``mul``, ``inv``, ``pow``, ``trace``,
  ``sqrt``, ``cube_root``, ``half_trace_solve``),
* the same multiplication vectorized over numpy int64 arrays (``mul_vec``,
  ``pow_vec``) for the bulk analyses, and
* lazily built whole-field tables (squares, square roots, traces, x^e).

:class:`FieldElement` is a thin immutable wrapper for callers that prefer
operator syntax; it refuses to mix elements of different fields.
:class:`LinearizedPolynomial` represents maps L(x) = sum c_i x^(2^i) with
kernel/solve machinery via F2 Gaussian elimination.

Everything here is pure and immutable after construction, hence safe to use
from any number of workers.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import FieldMismatchError, InvariantViolationError

_VEC_DTYPE = np.int64  # products before reduction need 2m-1 <= 47 bits for m <= 24


# ----------------------------------------------------------------------
# Polynomials over F2 as bitmasks (bit i = coefficient of X^i)
# ----------------------------------------------------------------------

def poly_degree(mask: int) -> int:
    """Degree of the F2 polynomial encoded by ``mask`` (-1 for the zero poly)."""
    return mask.bit_length() - 1


def poly_mod(a: int, m: int) -> int:
    """Remainder of the F2 polynomial ``a`` modulo ``m`` (m != 0)."""
    dm = poly_degree(m)
    while poly_degree(a) >= dm:
        a ^= m << (poly_degree(a) - dm)
    return a


def is_irreducible(mask: int) -> bool:
    """Trial-division irreducibility test, intended for degrees up to ~24.

    Divides by every polynomial of degree 1 .. deg/2; a hit means reducible.
    """
    deg = poly_degree(mask)
    if deg < 1:
        return False
    if deg == 1:
        return True
    if mask & 1 == 0:  # divisible by X
        return False
    for d in range(1, deg // 2 + 1):
        base = 1 << d
        for low in range(base):
            if poly_mod(mask, base | low) == 0:
                return False
    return True


def smallest_irreducible(m: int) -> int:
    """Smallest (as an integer mask) monic irreducible of degree m over F2."""
    for cand in range((1 << m) | 1, 1 << (m + 1), 2):
        if is_irreducible(cand):
            return cand
    raise AssertionError(f"no irreducible polynomial of degree {m}")  # unreachable


# ----------------------------------------------------------------------
# Field
# ----------------------------------------------------------------------

class Field:
    """GF(2^m) with q = 2^m elements, 2 <= m (tested up to m = 24).

    The default reduction polynomial is the smallest irreducible mask of
    degree m, so two independently built fields with the same m agree.  An
    override must be monic of degree exactly m and irreducible.
    """

    def __init__(self, m: int, reduction: int | None = None):
        if m < 2:
            raise ValueError(f"extension degree must be >= 2, got {m}")
        if reduction is None:
            reduction = smallest_irreducible(m)
        else:
            if poly_degree(reduction) != m:
                raise ValueError(
                    f"reduction polynomial 0x{reduction:x} has degree "
                    f"{poly_degree(reduction)}, expected {m}"
                )
            if not is_irreducible(reduction):
                raise ValueError(f"reduction polynomial 0x{reduction:x} is reducible")
        self.m = m
        self.q = 1 << m
        self.reduction = reduction
        self._tables: dict = {}

    # -- identity ------------------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, Field)
            and self.m == other.m
            and self.reduction == other.reduction
        )

    def __hash__(self):
        return hash((self.m, self.reduction))

    def __repr__(self):
        return f"Field(m={self.m}, reduction=0x{self.reduction:x})"

    def text(self) -> str:
        """Canonical text form, e.g. ``m=3,poly=0xb``."""
        return f"m={self.m},poly=0x{self.reduction:x}"

    # -- scalar arithmetic on int masks --------------------------------

    def element(self, bits: int) -> "FieldElement":
        return FieldElement(self, bits)

    def elements(self) -> range:
        return range(self.q)

    def nonzero_elements(self) -> range:
        return range(1, self.q)

    @staticmethod
    def add(a: int, b: int) -> int:
        """Field addition is xor of the masks."""
        return a ^ b

    def mul(self, a: int, b: int) -> int:
        """Carryless product of two masks, reduced modulo the field polynomial."""
        acc = 0
        while b:
            if b & 1:
                acc ^= a
            a <<= 1
            if a & self.q:
                a ^= self.reduction
            b >>= 1
        return acc

    def square(self, a: int) -> int:
        return self.mul(a, a)

    def pow(self, a: int, e: int) -> int:
        """a^e with exponents reduced mod q-1 for nonzero a; 0^0 = 1."""
        if a == 0:
            if e == 0:
                return 1
            if e < 0:
                raise ValueError("negative power of zero")
            return 0
        e %= self.q - 1
        acc = 1
        base = a
        while e:
            if e & 1:
                acc = self.mul(acc, base)
            base = self.mul(base, base)
            e >>= 1
        return acc

    def inv(self, a: int) -> int:
        if a == 0:
            raise ValueError("zero has no multiplicative inverse")
        return self.pow(a, self.q - 2)

    def trace(self, a: int) -> int:
        """Absolute trace onto F2: sum of a^(2^i), i = 0 .. m-1. Returns 0 or 1."""
        acc = a
        y = a
        for _ in range(self.m - 1):
            y = self.mul(y, y)
            acc ^= y
        return acc

    def sqrt(self, a: int) -> int:
        """The unique square root a^(2^(m-1)) (Frobenius is bijective)."""
        for _ in range(self.m - 1):
            a = self.mul(a, a)
        return a

    def frob(self, a: int, i: int) -> int:
        """a^(2^i) for any integer i, negative meaning inverse Frobenius."""
        i %= self.m
        for _ in range(i):
            a = self.mul(a, a)
        return a

    def cube_root_exponent(self) -> int:
        """e with 3e = 1 mod q-1; exists iff m is odd (then gcd(3, q-1) = 1)."""
        if self.m % 2 == 0:
            raise ValueError("cube roots are not unique in GF(2^m) for even m")
        return pow(3, -1, self.q - 1)

    def cube_root(self, a: int) -> int:
        """Unique cube root for odd m; cube_root(0) = 0."""
        return self.pow(a, self.cube_root_exponent()) if a else 0

    def half_trace_solve(self, c: int) -> tuple[int, ...]:
        """All solutions v of v^2 + v = c: empty if trace(c) = 1, else a pair.

        For odd m uses the half-trace v = sum c^(4^i), i = 0 .. (m-1)/2; the
        result is substituted back before returning.  Even m falls back to
        the generic linear solver.
        """
        if self.trace(c) == 1:
            return ()
        if self.m % 2 == 1:
            v = c
            y = c
            for _ in range((self.m - 1) // 2):
                y = self.mul(y, y)
                y = self.mul(y, y)
                v ^= y
            if self.mul(v, v) ^ v != c:
                raise InvariantViolationError(
                    f"half-trace solution check failed for c=0x{c:x} in {self}"
                )
            return (v, v ^ 1) if v < (v ^ 1) else (v ^ 1, v)
        frob_sq = LinearizedPolynomial.from_bits(self, [(0, 1), (1, 1)])
        sols = sorted(s.bits for s in linearized_solve(frob_sq, self.element(c)))
        return tuple(sols)

    # -- vectorized arithmetic on numpy int64 arrays --------------------

    def mul_vec(self, a, b) -> np.ndarray:
        """Elementwise carryless multiply-and-reduce; broadcasts like numpy."""
        a = np.asarray(a, dtype=_VEC_DTYPE)
        b = np.asarray(b, dtype=_VEC_DTYPE)
        acc = np.zeros(np.broadcast(a, b).shape, dtype=_VEC_DTYPE)
        for i in range(self.m):
            acc ^= ((b >> i) & 1) * (a << i)
        red = int(self.reduction)
        for bit in range(2 * self.m - 2, self.m - 1, -1):
            acc ^= ((acc >> bit) & 1) * (red << (bit - self.m))
        return acc

    def pow_vec(self, a, e: int) -> np.ndarray:
        """Elementwise a^e with the same exponent semantics as :meth:`pow`."""
        a = np.asarray(a, dtype=_VEC_DTYPE)
        if e == 0:
            return np.ones_like(a)
        if e < 0 and bool(np.any(a == 0)):
            raise ValueError("negative power of zero")
        e_red = e % (self.q - 1)
        if e_red == 0:
            return np.where(a == 0, 0, 1).astype(_VEC_DTYPE)
        acc = np.ones_like(a)
        base = a
        while e_red:
            if e_red & 1:
                acc = self.mul_vec(acc, base)
            e_red >>= 1
            if e_red:
                base = self.mul_vec(base, base)
        return acc

    # -- lazily built whole-field tables (O(q) memory each) -------------

    def _table(self, key, build):
        tab = self._tables.get(key)
        if tab is None:
            tab = build()
            if isinstance(tab, np.ndarray):
                tab.setflags(write=False)
            self._tables[key] = tab
        return tab

    @property
    def elements_vec(self) -> np.ndarray:
        return self._table("elements", lambda: np.arange(self.q, dtype=_VEC_DTYPE))

    @property
    def square_table(self) -> np.ndarray:
        return self._table(
            "square", lambda: self.mul_vec(self.elements_vec, self.elements_vec)
        )

    @property
    def sqrt_table(self) -> np.ndarray:
        def build():
            inv = np.empty(self.q, dtype=_VEC_DTYPE)
            inv[self.square_table] = self.elements_vec
            return inv

        return self._table("sqrt", build)

    @property
    def trace_table(self) -> np.ndarray:
        def build():
            acc = self.elements_vec.copy()
            y = self.elements_vec
            for _ in range(self.m - 1):
                y = self.mul_vec(y, y)
                acc ^= y
            return acc.astype(np.uint8)

        return self._table("trace", build)

    def power_table(self, e: int) -> np.ndarray:
        """Table of x^e over the whole field, cached per exponent."""
        return self._table(("pow", e), lambda: self.pow_vec(self.elements_vec, e))

    @property
    def frobenius_basis(self) -> np.ndarray:
        """m x m int array P with P[i][j] = (X^j)^(2^i)."""
        def build():
            basis = np.empty((self.m, self.m), dtype=_VEC_DTYPE)
            cur = np.int64(1) << np.arange(self.m, dtype=_VEC_DTYPE)
            for i in range(self.m):
                basis[i] = cur
                cur = self.mul_vec(cur, cur)
            return basis

        return self._table("frob_basis", build)

    @property
    def trace_dual_perm(self) -> np.ndarray:
        """Permutation u with Tr(v*x) = <u(v), x> (bitwise dot product).

        u is the invertible F2-linear map u(v)_j = Tr(v * X^j); it converts a
        plain Walsh-Hadamard index into the trace-pairing index.
        """
        def build():
            rows = []
            for i in range(self.m):
                row = 0
                for j in range(self.m):
                    row |= self.trace(self.mul(1 << i, 1 << j)) << j
                rows.append(row)
            v = self.elements_vec
            out = np.zeros(self.q, dtype=np.intp)
            for i in range(self.m):
                out ^= (((v >> i) & 1) * rows[i]).astype(np.intp)
            return out

        return self._table("trace_dual", build)


@lru_cache(maxsize=None)
def field_params(m: int, reduction: int | None = None) -> Field:
    """Shared Field instance per (m, reduction); tables are reused."""
    return Field(m, reduction)


# ----------------------------------------------------------------------
# FieldElement
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class FieldElement:
    """An element of a specific Field, wrapping its int mask."""

    field: Field
    bits: int

    def __post_init__(self):
        if not 0 <= self.bits < self.field.q:
            raise ValueError(
                f"element mask 0x{self.bits:x} out of range for {self.field}"
            )

    def _same(self, other: "FieldElement") -> None:
        if not isinstance(other, FieldElement):
            raise TypeError(f"expected FieldElement, got {type(other).__name__}")
        if other.field != self.field:
            raise FieldMismatchError(
                f"mixing elements of {self.field} and {other.field}"
            )

    def __add__(self, other):
        self._same(other)
        return FieldElement(self.field, self.bits ^ other.bits)

    __sub__ = __add__

    def __mul__(self, other):
        self._same(other)
        return FieldElement(self.field, self.field.mul(self.bits, other.bits))

    def __truediv__(self, other):
        self._same(other)
        return FieldElement(
            self.field, self.field.mul(self.bits, self.field.inv(other.bits))
        )

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow(self.bits, e))

    def __bool__(self):
        return self.bits != 0

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv(self.bits))

    def trace(self) -> int:
        return self.field.trace(self.bits)

    def sqrt(self) -> "FieldElement":
        return FieldElement(self.field, self.field.sqrt(self.bits))

    def cube_root(self) -> "FieldElement":
        return FieldElement(self.field, self.field.cube_root(self.bits))

    def hex(self) -> str:
        """Text encoding: lowercase hex of the mask with 0x prefix."""
        return f"0x{self.bits:x}"

    def __str__(self):
        return self.hex()


def half_trace_solve(c: FieldElement) -> tuple[FieldElement, ...]:
    """Solutions of v^2 + v = c as elements; empty when trace(c) = 1."""
    return tuple(FieldElement(c.field, v) for v in c.field.half_trace_solve(c.bits))


# ----------------------------------------------------------------------
# Linearized polynomials L(x) = sum c_i x^(2^i)
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class LinearizedPolynomial:
    """F2-linear map on a field, as a sum of Frobenius-power terms.

    ``terms`` is a tuple of (i, c) pairs meaning c * x^(2^i).  Exponent
    indices are kept modulo m (x^(2^m) = x); like terms are combined and
    zero coefficients dropped.
    """

    field: Field
    terms: tuple[tuple[int, FieldElement], ...]

    @classmethod
    def from_bits(cls, field: Field, terms) -> "LinearizedPolynomial":
        combined: dict[int, int] = {}
        for i, c in terms:
            bits = c.bits if isinstance(c, FieldElement) else c
            key = i % field.m
            combined[key] = combined.get(key, 0) ^ bits
        kept = tuple(
            (i, FieldElement(field, c)) for i, c in sorted(combined.items()) if c
        )
        return cls(field, kept)

    def __add__(self, other: "LinearizedPolynomial") -> "LinearizedPolynomial":
        if other.field != self.field:
            raise FieldMismatchError("adding linearized polynomials over different fields")
        return LinearizedPolynomial.from_bits(
            self.field, [(i, c.bits) for i, c in self.terms + other.terms]
        )

    def eval_bits(self, x: int) -> int:
        f = self.field
        acc = 0
        for i, c in self.terms:
            acc ^= f.mul(c.bits, f.frob(x, i))
        return acc

    def eval(self, x: FieldElement) -> FieldElement:
        if x.field != self.field:
            raise FieldMismatchError("evaluating linearized polynomial on foreign element")
        return FieldElement(self.field, self.eval_bits(x.bits))

    def adjoint(self) -> "LinearizedPolynomial":
        """Trace-adjoint L^ with Tr(y * L(x)) = Tr(L^(y) * x) for all x, y.

        Term (i, c) maps to ((m - i) mod m, c^(2^(m-i))).
        """
        f = self.field
        out = []
        for i, c in self.terms:
            k = (f.m - i) % f.m
            out.append((k, f.frob(c.bits, k)))
        return LinearizedPolynomial.from_bits(f, out)

    def columns(self) -> list[int]:
        """Images of the monomial basis: column j is L(X^j) as a mask."""
        f = self.field
        basis = f.frobenius_basis
        cols = []
        for j in range(f.m):
            acc = 0
            for i, c in self.terms:
                acc ^= f.mul(c.bits, int(basis[i % f.m][j]))
            cols.append(acc)
        return cols


def _eliminate(cols: list[int]):
    """Gaussian elimination over F2 on basis images.

    Returns (pivots, kernel) where pivots are (value, preimage, pivot_bit)
    triples and kernel is a list of preimage masks spanning ker L.
    """
    pivots: list[tuple[int, int, int]] = []
    kernel: list[int] = []
    for j, col in enumerate(cols):
        v, pre = col, 1 << j
        for pv, pp, bit in pivots:
            if (v >> bit) & 1:
                v ^= pv
                pre ^= pp
        if v == 0:
            kernel.append(pre)
        else:
            pivots.append((v, pre, (v & -v).bit_length() - 1))
    return pivots, kernel


def span_masks(basis: list[int]) -> list[int]:
    """All 2^len(basis) F2-combinations of the given masks (0 included)."""
    out = [0]
    for b in basis:
        out += [e ^ b for e in out]
    return out


def linearized_kernel(poly: LinearizedPolynomial) -> list[FieldElement]:
    """F2-basis of ker L as field elements (empty list for a trivial kernel)."""
    _, kernel = _eliminate(poly.columns())
    return [FieldElement(poly.field, k) for k in kernel]


def linearized_solve(poly: LinearizedPolynomial, t: FieldElement) -> list[FieldElement]:
    """All x with L(x) = t; empty if inconsistent, else 2^dim(ker L) many."""
    if t.field != poly.field:
        raise FieldMismatchError("target element from a different field")
    pivots, kernel = _eliminate(poly.columns())
    r, x = t.bits, 0
    for pv, pp, bit in pivots:
        if (r >> bit) & 1:
            r ^= pv
            x ^= pp
    if r != 0:
        return []
    return [FieldElement(poly.field, x ^ k) for k in sorted(span_masks(kernel))]
