"""Truth tables, Walsh spectra and spectral statistics of f = Tr(G(x)).

A truth table holds the q = 2^m bits f(x) indexed by the element mask x.
The Walsh spectrum holds the q signed integers

    fhat(v) = sum_x (-1)^(f(x) + Tr(v*x))

indexed by v, where the pairing is the field product followed by the trace
(the bit-dot-product variant is the same multiset up to an invertible index
permutation, which :func:`fwht` exposes for cross-checks).  The transform is
computed on (-1)^f as plain integers; nothing here ever touches floating
point, and the two power-sum statistics are accumulated in exact Python
ints.

All values are immutable after construction and safe to share across
workers.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from .errors import CorruptedSpectrumError
from .gf2m import Field, FieldElement


# ----------------------------------------------------------------------
# Polynomials G over the field
# ----------------------------------------------------------------------

class SparsePolynomial:
    """A polynomial over GF(2^m) as (exponent, coefficient) terms.

    Zero coefficients are dropped; exponents must be distinct non-negative
    ints.  The zero polynomial is the empty term list.
    """

    def __init__(self, field: Field, terms=()):
        self.field = field
        combined: dict[int, int] = {}
        for exp, coef in terms:
            bits = coef.bits if isinstance(coef, FieldElement) else int(coef)
            if not isinstance(exp, int) or exp < 0:
                raise ValueError(f"bad exponent {exp!r}")
            if exp in combined:
                raise ValueError(f"duplicate exponent {exp}")
            if isinstance(coef, FieldElement) and coef.field != field:
                raise ValueError("coefficient from a different field")
            combined[exp] = bits
        self.terms = tuple(
            (e, FieldElement(field, c)) for e, c in sorted(combined.items()) if c
        )

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        if not self.terms:
            raise ValueError("the zero polynomial has no degree")
        return self.terms[-1][0]

    def eval_bits(self, x: int) -> int:
        f = self.field
        acc = 0
        for e, c in self.terms:
            acc ^= f.mul(c.bits, f.pow(x, e))
        return acc

    def __call__(self, x: FieldElement) -> FieldElement:
        return FieldElement(self.field, self.eval_bits(x.bits))

    def value_table(self) -> np.ndarray:
        """G(x) for every x, as an int64 array of masks."""
        f = self.field
        acc = np.zeros(f.q, dtype=np.int64)
        for e, c in self.terms:
            acc ^= f.mul_vec(f.power_table(e), c.bits)
        return acc

    def __repr__(self):
        body = " + ".join(f"{c}*x^{e}" for e, c in reversed(self.terms)) or "0"
        return f"SparsePolynomial({body} over {self.field})"


class FamilyPolynomial:
    """G = a7 x^7 + sum b_i x^(2^i + 1) with a7 != 0.

    Indices i run over 1 .. m-1.  An i = 0 term (b0 x^2, binary weight 1) is
    rejected unless ``allow_square_term`` is set: Tr(b0 x^2) = Tr(sqrt(b0) x)
    only shifts the spectrum index, so such a term is folded into the
    analyses unchanged and does not count towards s.
    """

    def __init__(self, a7: FieldElement, b=(), allow_square_term: bool = False):
        if not isinstance(a7, FieldElement):
            raise TypeError("a7 must be a FieldElement")
        if a7.bits == 0:
            raise ValueError("a7 must be nonzero")
        self.field = a7.field
        self.a7 = a7
        m = self.field.m
        combined: dict[int, int] = {}
        for i, coef in b:
            bits = coef.bits if isinstance(coef, FieldElement) else int(coef)
            if isinstance(coef, FieldElement) and coef.field != self.field:
                raise ValueError("coefficient from a different field")
            if not isinstance(i, int) or i < 0 or i > m - 1:
                raise ValueError(f"index {i!r} outside 0 .. m-1")
            if i == 0 and not allow_square_term:
                raise ValueError(
                    "index 0 adds a square term; pass allow_square_term=True "
                    "to fold it in as an affine shift"
                )
            if i in combined:
                raise ValueError(f"duplicate index {i}")
            combined[i] = bits
        self.b = tuple(
            (i, FieldElement(self.field, c)) for i, c in sorted(combined.items()) if c
        )
        self.s = max((i for i, _ in self.b if i >= 1), default=0)
        self.has_square_term = any(i == 0 for i, _ in self.b)

    def to_sparse(self) -> SparsePolynomial:
        terms = [(7, self.a7)] + [((1 << i) + 1, c) for i, c in self.b]
        return SparsePolynomial(self.field, terms)

    def __repr__(self):
        bs = ", ".join(f"b{i}={c}" for i, c in self.b)
        return f"FamilyPolynomial(a7={self.a7}{', ' + bs if bs else ''} over {self.field})"


def random_family(field: Field, s: int, rng: random.Random,
                  allow_square_term: bool = False) -> FamilyPolynomial:
    """Draw a family polynomial with exactly the given s (coefficient b_s != 0).

    Inner coefficients b_1 .. b_{s-1} are uniform over the field and dropped
    when zero; a7 is uniform over the nonzero elements.  Fully determined by
    the rng state.
    """
    if s < 0 or (s > field.m - 1):
        raise ValueError(f"s must lie in 0 .. m-1, got {s}")
    a7 = FieldElement(field, rng.randrange(1, field.q))
    b = []
    for i in range(1, s + 1):
        lo = 1 if i == s else 0
        b.append((i, FieldElement(field, rng.randrange(lo, field.q))))
    return FamilyPolynomial(a7, b, allow_square_term=allow_square_term)


def _as_sparse(G) -> SparsePolynomial:
    return G.to_sparse() if isinstance(G, FamilyPolynomial) else G


# ----------------------------------------------------------------------
# Truth tables and the transform
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class TruthTable:
    """q-entry bit table of a Boolean function, indexed by the mask of x."""

    field: Field
    values: np.ndarray

    def __post_init__(self):
        vals = np.ascontiguousarray(self.values, dtype=np.uint8)
        if vals.shape != (self.field.q,):
            raise ValueError(f"expected {self.field.q} entries, got {vals.shape}")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def m(self) -> int:
        return self.field.m

    def weight(self) -> int:
        return int(self.values.sum())


@dataclass(frozen=True)
class WalshSpectrum:
    """q signed Walsh values fhat(v), indexed by v under the trace pairing."""

    field: Field
    values: np.ndarray

    def __post_init__(self):
        vals = np.ascontiguousarray(self.values, dtype=np.int64)
        if vals.shape != (self.field.q,):
            raise ValueError(f"expected {self.field.q} entries, got {vals.shape}")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def m(self) -> int:
        return self.field.m


def from_trace_poly(G) -> TruthTable:
    """Truth table of f(x) = Tr(G(x)) over the polynomial's field."""
    sp = _as_sparse(G)
    return TruthTable(sp.field, sp.field.trace_table[sp.value_table()])


def fwht(values: np.ndarray) -> np.ndarray:
    """In-place fast Walsh-Hadamard transform along the last axis.

    This is the plain bit-dot-product transform on an int64 array whose last
    axis has power-of-two length; the input buffer is overwritten.
    """
    n = values.shape[-1]
    flat = values.reshape(-1, n)
    h = 1
    while h < n:
        chunk = flat.reshape(flat.shape[0], -1, 2 * h)
        left = chunk[:, :, :h].copy()
        chunk[:, :, :h] = left + chunk[:, :, h:]
        chunk[:, :, h:] = left - chunk[:, :, h:]
        h *= 2
    return values


def walsh_transform(tt: TruthTable) -> WalshSpectrum:
    """Walsh spectrum of a truth table under the Tr(v*x) pairing.

    Runs the O(q log q) butterfly transform on (-1)^f and then permutes the
    index by the invertible map u(v) with Tr(v*x) = <u(v), x>.
    """
    signs = (1 - 2 * tt.values.astype(np.int64))
    spectrum = fwht(signs)
    return WalshSpectrum(tt.field, spectrum[tt.field.trace_dual_perm])


# ----------------------------------------------------------------------
# Spectral statistics
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class SpectrumStats:
    """Exact integer norms of a spectrum.

    l2sq = (1/q) sum fhat^2 (Parseval makes this q), l4p4 = (1/q) sum fhat^4
    (the sum-of-square indicator), linf the max absolute value, and
    nl = 2^(m-1) - linf/2.
    """

    m: int
    linf: int
    nl: int
    l2sq: int
    l4p4: int


def exact_power_sums(values: np.ndarray) -> tuple[int, int, int]:
    """(max |v|, sum v^2, sum v^4) of an int64 array, exact in Python ints.

    Fourth powers overflow int64 for m >= 13, so the sums run over the value
    histogram instead of the raw array.
    """
    counts = np.bincount(np.abs(values).reshape(-1))
    nz = np.nonzero(counts)[0]
    s2 = 0
    s4 = 0
    for v in nz.tolist():
        c = int(counts[v])
        v2 = v * v
        s2 += c * v2
        s4 += c * v2 * v2
    linf = int(nz[-1]) if len(nz) else 0
    return linf, s2, s4


def spectrum_stats(sp: WalshSpectrum) -> SpectrumStats:
    """Exact statistics; raises CorruptedSpectrumError on inexact division."""
    q = sp.field.q
    linf, s2, s4 = exact_power_sums(sp.values)
    if s2 % q or s4 % q:
        raise CorruptedSpectrumError(
            f"power sums not divisible by q={q}: sum^2={s2}, sum^4={s4}"
        )
    if linf % 2:
        raise CorruptedSpectrumError(f"odd spectral amplitude {linf}")
    return SpectrumStats(
        m=sp.field.m,
        linf=linf,
        nl=(1 << (sp.field.m - 1)) - linf // 2,
        l2sq=s2 // q,
        l4p4=s4 // q,
    )


def binary_degree(G) -> int:
    """Max binary digit sum of the exponents with a nonzero coefficient."""
    sp = _as_sparse(G)
    if sp.is_zero():
        raise ValueError("the zero polynomial has no binary degree")
    return max(e.bit_count() for e, _ in sp.terms)


@dataclass(frozen=True)
class DivisibilityReport:
    """2-adic divisibility of the spectrum by 2^ceil(m/d).

    ``holds`` checks the spectral amplitude (the guaranteed statement);
    ``per_coefficient_holds`` extends the same modulus to every fhat(v) and
    is informational only, with ``witness`` the first offending v.
    """

    modulus: int
    holds: bool
    per_coefficient_holds: bool
    witness: int | None


def divisibility_check(sp: WalshSpectrum, d: int) -> DivisibilityReport:
    if d < 1:
        raise ValueError(f"binary degree must be >= 1, got {d}")
    m = sp.field.m
    modulus = 1 << (-(-m // d))
    linf, _, _ = exact_power_sums(sp.values)
    rem = sp.values % modulus
    bad = np.nonzero(rem)[0]
    return DivisibilityReport(
        modulus=modulus,
        holds=linf % modulus == 0,
        per_coefficient_holds=len(bad) == 0,
        witness=int(bad[0]) if len(bad) else None,
    )


def spectrum_csv(sp: WalshSpectrum) -> str:
    """CSV dump, header ``v_hex,walsh``, one row per v in ascending order."""
    lines = ["v_hex,walsh"]
    vals = sp.values.tolist()
    lines += [f"0x{v:x},{w}" for v, w in enumerate(vals)]
    return "\n".join(lines) + "\n"
