"""Point counts of y^2 + y = a x^5 + b x^3 + c x + d over GF(2^m).

The count is pinned down two independent ways and the two must agree:

* directly, #C = 1 + 2 * #{x : Tr(a x^5 + b x^3 + c x + d) = 0} (one point
  at infinity; the constant d is kept inside the count so the formula holds
  for every d, not just Tr(d) = 0);
* structurally, through the quadratic form Q(x) = Tr(x R(x)) with
  R = a x^4 + b x^2 + c^2 x: the radical W of the polar symplectic form is
  the kernel of E = R + R^ (trace-adjoint), and the count must land in
  {1 + q} when Q does not vanish on W, else in {1 + q +- sqrt(2^w q)}.

The +- sign is never predicted, only checked: the direct count resolves it.
A disagreement raises InvariantViolationError and is treated as a bug, not
a data error.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvariantViolationError
from .gf2m import (
    FieldElement,
    LinearizedPolynomial,
    linearized_kernel,
    span_masks,
)


@dataclass(frozen=True)
class ArtinSchreierQuintic:
    """Curve y^2 + y = a x^5 + b x^3 + c x + d with a != 0 (genus 2)."""

    a: FieldElement
    b: FieldElement
    c: FieldElement
    d: FieldElement

    def __post_init__(self):
        f = self.a.field
        for coef in (self.b, self.c, self.d):
            if coef.field != f:
                raise ValueError("curve coefficients from different fields")
        if self.a.bits == 0:
            raise ValueError("a = 0: not a quintic Artin-Schreier curve")

    @property
    def field(self):
        return self.a.field


@dataclass(frozen=True)
class QuadraticFormReport:
    """Radical/point-count analysis of one quintic curve.

    ``admissible`` is the set of counts allowed given the radical dimension
    w and whether Q vanishes on W; ``count_direct`` is always a member.
    """

    r: LinearizedPolynomial
    w: int
    v_equals_w: bool
    count_direct: int
    exp_sum: int
    admissible: tuple[int, ...]
    q_zero_count: int


def r_polynomial(curve: ArtinSchreierQuintic) -> LinearizedPolynomial:
    """R = a x^4 + b x^2 + c^2 x, the linearized part driving Q."""
    f = curve.field
    c2 = f.square(curve.c.bits)
    return LinearizedPolynomial.from_bits(f, [(2, curve.a.bits), (1, curve.b.bits), (0, c2)])


def quadratic_form_eval(curve: ArtinSchreierQuintic, x: FieldElement) -> int:
    """Q(x) = Tr(x * R(x)) as a bit."""
    f = curve.field
    r = r_polynomial(curve)
    return f.trace(f.mul(x.bits, r.eval_bits(x.bits)))


def radical(curve: ArtinSchreierQuintic) -> tuple[list[FieldElement], int]:
    """Basis of the radical W of <x,y> = Tr(xR(y) + yR(x)) and its dimension.

    <x,y> = Tr(y * E(x)) for E = R + R^, and the trace pairing is
    non-degenerate, so W = ker E.
    """
    r = r_polynomial(curve)
    basis = linearized_kernel(r + r.adjoint())
    return basis, len(basis)


def _curve_tables(curve: ArtinSchreierQuintic) -> tuple[np.ndarray, np.ndarray]:
    """(Q(x) table, Tr(a x^5 + b x^3 + c x + d) table) over the whole field."""
    f = curve.field
    x = f.elements_vec
    quintic = (
        f.mul_vec(f.power_table(5), curve.a.bits)
        ^ f.mul_vec(f.power_table(3), curve.b.bits)
        ^ f.mul_vec(x, curve.c.bits)
    )
    q_table = f.trace_table[quintic]
    full_table = f.trace_table[quintic ^ curve.d.bits]
    return q_table, full_table


def exp_sum(curve: ArtinSchreierQuintic) -> int:
    """S = sum_x (-1)^Tr(a x^5 + b x^3 + c x + d); #C = 1 + q + S."""
    _, full = _curve_tables(curve)
    return curve.field.q - 2 * int(full.sum())


def analyze(curve: ArtinSchreierQuintic) -> QuadraticFormReport:
    """Full radical / kernel / point-count report with the admissible-set check.

    V = {x in W : Q(x) = 0} is found by evaluating Q on all 2^w elements of
    W; its codimension in W must be 0 or 1.  The direct count must fall in
    the admissible set, otherwise InvariantViolationError.
    """
    f = curve.field
    q = f.q
    basis, w = radical(curve)
    q_table, full_table = _curve_tables(curve)

    span = np.array(span_masks([b.bits for b in basis]), dtype=np.int64)
    # Q(x) = Tr(a x^5 + b x^3 + c x) pointwise, since Tr(c^2 x^2) = Tr(cx)
    on_radical = q_table[span]
    v_size = (1 << w) - int(on_radical.sum())
    if v_size not in (1 << w, (1 << w) // 2):
        raise InvariantViolationError(
            f"kernel V has size {v_size} inside a radical of size {1 << w}"
        )
    v_equals_w = v_size == 1 << w

    count = 1 + 2 * (q - int(full_table.sum()))
    s = count - 1 - q

    if not v_equals_w:
        admissible = (1 + q,)
    elif (w + f.m) % 2 == 0:
        dev = 1 << ((w + f.m) // 2)
        admissible = (1 + q - dev, 1 + q, 1 + q + dev)
    else:
        # sqrt(2^w q) is irrational; only the untouched count is integral
        admissible = (1 + q,)

    if count not in admissible:
        raise InvariantViolationError(
            f"count {count} outside admissible {admissible} "
            f"(w={w}, V=W: {v_equals_w}) for curve over {f}"
        )

    return QuadraticFormReport(
        r=r_polynomial(curve),
        w=w,
        v_equals_w=v_equals_w,
        count_direct=count,
        exp_sum=s,
        admissible=admissible,
        q_zero_count=q - int(q_table.sum()),
    )
