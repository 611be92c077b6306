"""Derivative-curve analysis of f = Tr(G) for G = a7 x^7 + sum b_i x^(2^i+1).

For each alpha != 0 the squared derivative character sum

    X_alpha = ( sum_x (-1)^Tr(G(x) + G(x+alpha)) )^2

is obtained from the point count of a genus-2 quintic curve whose
coefficients are explicit Frobenius-power expressions in a7, the b_i and
alpha.  :func:`survey` runs the whole alpha sweep and cross-checks three
fully independent routes against each other:

* the brute-force derivative sums (one O(q) pass per alpha),
* the radical/kernel classification of the curve (X_alpha is 0 when the
  quadratic form does not vanish on the radical, else 2^w q), and
* the fourth-power norm of the Walsh spectrum, which must equal
  q^2 + sum X_alpha exactly.

Any disagreement raises InvariantViolationError.  For odd m the values land
in {0, 2q, 8q} and the 2q class is flagged by Tr(l) = 1 for
l = a7^(-1/3) alpha^(-7/3); both facts are asserted per alpha.

Irrational bound comparisons (q^(3/2), sqrt(q), the s = 0 factor 2^(s-1))
are done by squaring in exact integer arithmetic; no floating point.
"""

from __future__ import annotations

import enum
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import boolfn, curves
from .boolfn import FamilyPolynomial, binary_degree
from .errors import InvariantViolationError
from .gf2m import FieldElement, LinearizedPolynomial, field_params, linearized_solve

_CHUNK = 4096            # alphas per work unit; fixed so results never depend on workers
_DERIV_BLOCK_BYTES = 1 << 25


class AlphaClass(str, enum.Enum):
    ZERO = "0"
    TWO_Q = "2q"
    EIGHT_Q = "8q"


@dataclass(frozen=True)
class AlphaRecord:
    """Classification of a single alpha: X_alpha, l and its trace."""

    alpha: FieldElement
    ell: FieldElement
    tr_ell: int
    x_alpha: int
    klass: AlphaClass


@dataclass(frozen=True)
class AlphaSweep:
    """Raw per-alpha results of a survey (ascending alpha)."""

    q: int
    alphas: np.ndarray
    tr_ell: np.ndarray
    x_alpha: np.ndarray

    def klass_labels(self) -> list[str]:
        two, eight = 2 * self.q, 8 * self.q
        return [
            "2q" if x == two else ("8q" if x == eight else "0")
            for x in self.x_alpha.tolist()
        ]

    def to_csv(self) -> str:
        lines = ["alpha_hex,tr_ell,x_alpha,class"]
        labels = self.klass_labels()
        for a, t, x, k in zip(
            self.alphas.tolist(), self.tr_ell.tolist(), self.x_alpha.tolist(), labels
        ):
            lines.append(f"0x{a:x},{t},{x},{k}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class SurveyReport:
    """Family-wide alpha sweep summary with all bound booleans.

    The n8/n2 bounds compare 8*n8 and 2*n2 against q, reading the reference
    count as a fraction of the field size; that interpretation is part of
    this report's contract (see ``count_bound_note``).
    """

    m: int
    s: int
    q: int
    poly: int
    a7: str
    b: tuple[tuple[int, str], ...]
    n0: int
    n2: int
    n8: int
    sum_x_alpha: int
    l4p4_curve: int
    l4p4_fwht: int
    linf: int
    bound_eval_holds: bool
    bound_n8_holds: bool
    bound_n2_holds: bool
    lower_bound_holds: bool
    strict_lower_holds: bool
    lower_bound_scope: str
    divisibility_modulus: int
    divisibility_holds: bool
    square_term_folded: bool
    count_bound_note: str
    sweep: AlphaSweep | None = None


@dataclass(frozen=True)
class LowerBoundReport:
    """Spectral amplitude lower-bound checks for one family polynomial."""

    m: int
    s: int
    q: int
    linf: int
    l4p4: int
    geq_holds: bool          # 2q <= linf^2
    strict_holds: bool       # 2q <  linf^2
    l4_le_q_linf2: bool      # l4p4 <= q * linf^2
    divisibility_modulus: int
    divisibility_holds: bool
    scope: str


_COUNT_NOTE = (
    "n8/n2 bounds read the reference counts as fractions of the field size: "
    "8*n8 and 2*n2 are compared against q"
)


# ----------------------------------------------------------------------
# Single-alpha operations
# ----------------------------------------------------------------------

def _check_family_alpha(G: FamilyPolynomial, alpha: FieldElement) -> None:
    if alpha.field != G.field:
        raise ValueError("alpha from a different field")
    if G.field.m % 2 == 0:
        raise ValueError("derivative-curve analysis requires odd m")
    if alpha.bits == 0:
        raise ValueError("alpha must be nonzero")


def derivative_curve(G: FamilyPolynomial, alpha: FieldElement) -> curves.ArtinSchreierQuintic:
    """Quintic curve whose point count encodes the derivative sum at alpha.

    Coefficients (Frobenius-fractional powers are iterated square roots):

        a = a7 alpha^2
        b = a7 alpha^4 + (a7 alpha)^(1/2)
        c = a7 alpha^6 + (a7 alpha^3)^(1/4) + (a7 alpha^5)^(1/2)
            + sum_i (b_i alpha)^(2^-i) + sum_i b_i alpha^(2^i)
        d = G(alpha)

    The defining identity Tr(G(x) + G(x+alpha)) = Tr(a x^5 + b x^3 + c x + d)
    holds pointwise, so the curve's exponential sum equals the derivative sum.
    """
    _check_family_alpha(G, alpha)
    f = G.field
    a7 = G.a7.bits
    al = alpha.bits
    al2 = f.square(al)
    al3 = f.mul(al, al2)
    al4 = f.square(al2)
    al5 = f.mul(al, al4)
    al6 = f.mul(al2, al4)
    a = f.mul(a7, al2)
    b = f.mul(a7, al4) ^ f.sqrt(f.mul(a7, al))
    c = f.mul(a7, al6) ^ f.sqrt(f.sqrt(f.mul(a7, al3))) ^ f.sqrt(f.mul(a7, al5))
    for i, bi in G.b:
        t = f.mul(bi.bits, al)
        for _ in range(i % f.m):
            t = f.sqrt(t)
        c ^= t                                  # (b_i alpha)^(2^-i)
        c ^= f.mul(bi.bits, f.frob(al, i))      # b_i alpha^(2^i)
    d = G.to_sparse().eval_bits(al)
    return curves.ArtinSchreierQuintic(
        FieldElement(f, a), FieldElement(f, b), FieldElement(f, c), FieldElement(f, d)
    )


def x_alpha(G: FamilyPolynomial, alpha: FieldElement) -> int:
    """X_alpha = (count - 1 - q)^2 from the derivative curve's point count."""
    report = curves.analyze(derivative_curve(G, alpha))
    dev = report.count_direct - 1 - G.field.q
    return dev * dev


def _ell_exponent(field) -> int:
    """Exponent e with alpha^e = alpha^(-7/3); odd m only."""
    return (-7 * field.cube_root_exponent()) % (field.q - 1)


def classify_alpha(G: FamilyPolynomial, alpha: FieldElement) -> AlphaRecord:
    """AlphaRecord with the Tr(l) criterion and the 8q image check asserted.

    l = a7^(-1/3) alpha^(-7/3).  Tr(l) = 1 must match X_alpha = 2q exactly;
    the 8q class must additionally have l = v + v^4 for some v of trace 0.
    """
    _check_family_alpha(G, alpha)
    f = G.field
    q = f.q
    ell_bits = f.mul(f.cube_root(f.inv(G.a7.bits)), f.pow(alpha.bits, _ell_exponent(f)))
    tr_ell = f.trace(ell_bits)
    xa = x_alpha(G, alpha)
    if xa == 0:
        klass = AlphaClass.ZERO
    elif xa == 2 * q:
        klass = AlphaClass.TWO_Q
    elif xa == 8 * q:
        klass = AlphaClass.EIGHT_Q
    else:
        raise InvariantViolationError(
            f"X_alpha = {xa} outside {{0, 2q, 8q}} at alpha={alpha} for {G!r}"
        )
    if (tr_ell == 1) != (klass is AlphaClass.TWO_Q):
        raise InvariantViolationError(
            f"Tr(l) = {tr_ell} does not match class {klass.value} at alpha={alpha}"
        )
    if klass is AlphaClass.EIGHT_Q:
        image = LinearizedPolynomial.from_bits(f, [(0, 1), (2, 1)])  # v + v^4
        sols = linearized_solve(image, FieldElement(f, ell_bits))
        if not any(v.trace() == 0 for v in sols):
            raise InvariantViolationError(
                f"8q class but l = {FieldElement(f, ell_bits)} is not v + v^4 "
                f"with Tr(v) = 0 at alpha={alpha}"
            )
    return AlphaRecord(
        alpha=alpha,
        ell=FieldElement(f, ell_bits),
        tr_ell=tr_ell,
        x_alpha=xa,
        klass=klass,
    )


# ----------------------------------------------------------------------
# Batched alpha sweep
# ----------------------------------------------------------------------

def _sweep_chunk(m, reduction, a7, b_terms, ftab, lo, hi):
    """Per-alpha data for alpha in [lo, hi): direct sums, radical, Tr(l).

    Runs in worker processes; everything needed travels in the arguments and
    the field handle is re-derived from (m, reduction).
    """
    f = field_params(m, reduction)
    q = f.q
    alphas = np.arange(lo, hi, dtype=np.int64)
    n = len(alphas)

    # Route 1: brute-force derivative sums S = sum chi(Tr(G(x) + G(x+alpha)))
    s_direct = np.empty(n, dtype=np.int64)
    x_all = f.elements_vec
    block = max(1, _DERIV_BLOCK_BYTES // (q * 8))
    for blo in range(0, n, block):
        part = alphas[blo:blo + block]
        mixed = ftab[x_all[None, :] ^ part[:, None]] ^ ftab[None, :]
        s_direct[blo:blo + len(part)] = q - 2 * mixed.sum(axis=1, dtype=np.int64)

    # Route 2: radical dimension and Q-on-radical verdict of the curve
    sq = f.square_table
    sqrt = f.sqrt_table
    tr = f.trace_table
    al2 = sq[alphas]
    al3 = f.mul_vec(alphas, al2)
    al4 = sq[al2]
    al5 = f.mul_vec(alphas, al4)
    al6 = f.mul_vec(al2, al4)
    a_arr = f.mul_vec(al2, a7)
    b_arr = f.mul_vec(al4, a7) ^ sqrt[f.mul_vec(alphas, a7)]
    c_arr = (
        f.mul_vec(al6, a7)
        ^ sqrt[sqrt[f.mul_vec(al3, a7)]]
        ^ sqrt[f.mul_vec(al5, a7)]
    )
    for i, bi in b_terms:
        t = f.mul_vec(alphas, bi)
        for _ in range(i % m):
            t = sqrt[t]
        c_arr ^= t
        fr = alphas
        for _ in range(i % m):
            fr = sq[fr]
        c_arr ^= f.mul_vec(fr, bi)

    # E = R + R^ has terms a x^4, b x^2, a^(2^(m-2)) x^(2^(m-2)),
    # b^(2^(m-1)) x^(2^(m-1)); the c^2 x terms cancel.
    basis = f.frobenius_basis
    am2 = sqrt[sqrt[a_arr]]
    bm1 = sqrt[b_arr]
    i_m2, i_m1 = (m - 2) % m, (m - 1) % m
    piv_vec: list[np.ndarray] = []
    piv_pre: list[np.ndarray] = []
    piv_bit: list[np.ndarray] = []
    w_arr = np.zeros(n, dtype=np.int64)
    kvecs = np.zeros((m, n), dtype=np.int64)
    lsb = np.zeros(q, dtype=np.int64)
    for i in range(m):
        lsb[1 << i] = i
    for j in range(m):
        col = (
            f.mul_vec(a_arr, int(basis[2][j]))
            ^ f.mul_vec(b_arr, int(basis[1][j]))
            ^ f.mul_vec(am2, int(basis[i_m2][j]))
            ^ f.mul_vec(bm1, int(basis[i_m1][j]))
        )
        pre = np.full(n, 1 << j, dtype=np.int64)
        for t in range(len(piv_vec)):
            hit = (col >> piv_bit[t]) & 1
            col ^= hit * piv_vec[t]
            pre ^= hit * piv_pre[t]
        dead = col == 0
        idx = np.nonzero(dead)[0]
        kvecs[w_arr[idx], idx] = pre[idx]
        w_arr[idx] += 1
        piv_vec.append(np.where(dead, 0, col))
        piv_pre.append(np.where(dead, 0, pre))
        piv_bit.append(lsb[col & -col])

    # Q restricted to the radical is linear (the polar form vanishes there),
    # so Q = 0 on W iff Q kills every kernel basis vector.
    c2_arr = sq[c_arr]
    veq = np.ones(n, dtype=bool)
    for t in range(int(w_arr.max(initial=0))):
        kb = kvecs[t]
        r_of = f.mul_vec(a_arr, sq[sq[kb]]) ^ f.mul_vec(b_arr, sq[kb]) ^ f.mul_vec(c2_arr, kb)
        veq &= tr[f.mul_vec(kb, r_of)] == 0

    # Tr(l) for l = a7^(-1/3) alpha^(-7/3)
    c0 = f.cube_root(f.inv(a7))
    ell = f.mul_vec(f.pow_vec(alphas, _ell_exponent(f)), c0)
    tr_ell = tr[ell]

    return {
        "s_direct": s_direct,
        "w": w_arr,
        "veq": veq,
        "tr_ell": tr_ell.astype(np.uint8),
    }


def _run_chunks(jobs, workers: int):
    if workers <= 1 or len(jobs) <= 1:
        return [_sweep_chunk(*job) for job in jobs]
    with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as pool:
        return list(pool.map(_sweep_chunk, *zip(*jobs)))


def survey(G: FamilyPolynomial, workers: int = 1, keep_sweep: bool = False) -> SurveyReport:
    """Sweep all alpha in k*, classify each X_alpha, and check every bound.

    The per-alpha work is split into fixed-size chunks reduced in order, so
    the report is identical for any worker count.
    """
    f = G.field
    if f.m % 2 == 0:
        raise ValueError("survey requires odd m")
    q = f.q
    ftab = boolfn.from_trace_poly(G).values
    b_terms = tuple((i, c.bits) for i, c in G.b)
    jobs = [
        (f.m, f.reduction, G.a7.bits, b_terms, ftab, lo, min(lo + _CHUNK, q))
        for lo in range(1, q, _CHUNK)
    ]
    parts = _run_chunks(jobs, workers)

    s_direct = np.concatenate([p["s_direct"] for p in parts])
    w_arr = np.concatenate([p["w"] for p in parts])
    veq = np.concatenate([p["veq"] for p in parts])
    tr_ell = np.concatenate([p["tr_ell"] for p in parts])
    alphas = np.arange(1, q, dtype=np.int64)

    x_direct = s_direct * s_direct
    x_struct = np.where(veq, (np.int64(1) << w_arr) * q, 0)
    bad = np.nonzero(x_direct != x_struct)[0]
    if len(bad):
        k = int(bad[0])
        raise InvariantViolationError(
            f"direct X_alpha {int(x_direct[k])} != structural {int(x_struct[k])} "
            f"(w={int(w_arr[k])}, V=W: {bool(veq[k])}) at alpha=0x{int(alphas[k]):x}"
        )
    allowed = np.isin(x_direct, [0, 2 * q, 8 * q])
    if not bool(allowed.all()):
        k = int(np.nonzero(~allowed)[0][0])
        raise InvariantViolationError(
            f"X_alpha = {int(x_direct[k])} outside {{0, 2q, 8q}} at alpha=0x{int(alphas[k]):x}"
        )
    mism = np.nonzero((tr_ell == 1) != (x_direct == 2 * q))[0]
    if len(mism):
        k = int(mism[0])
        raise InvariantViolationError(
            f"Tr(l) = {int(tr_ell[k])} does not match X_alpha = {int(x_direct[k])} "
            f"at alpha=0x{int(alphas[k]):x}"
        )

    n2 = int((x_direct == 2 * q).sum())
    n8 = int((x_direct == 8 * q).sum())
    n0 = q - 1 - n2 - n8
    sum_x = int(x_direct.sum())
    l4p4_curve = q * q + sum_x

    stats = boolfn.spectrum_stats(boolfn.walsh_transform(boolfn.TruthTable(f, ftab)))
    if stats.l4p4 != l4p4_curve:
        raise InvariantViolationError(
            f"l4p4 mismatch: transform gives {stats.l4p4}, curves give {l4p4_curve}"
        )

    s = G.s
    d = binary_degree(G)
    modulus = 1 << (-(-f.m // d))
    bounds = _bound_fields(f.m, s, q, stats.l4p4, n2, n8, stats.linf)

    sweep = None
    if keep_sweep:
        sweep = AlphaSweep(q=q, alphas=alphas, tr_ell=tr_ell, x_alpha=x_direct)

    return SurveyReport(
        m=f.m,
        s=s,
        q=q,
        poly=f.reduction,
        a7=G.a7.hex(),
        b=tuple((i, c.hex()) for i, c in G.b),
        n0=n0,
        n2=n2,
        n8=n8,
        sum_x_alpha=sum_x,
        l4p4_curve=l4p4_curve,
        l4p4_fwht=stats.l4p4,
        linf=stats.linf,
        bound_eval_holds=bounds["eval"],
        bound_n8_holds=bounds["n8"],
        bound_n2_holds=bounds["n2"],
        lower_bound_holds=bounds["geq"],
        strict_lower_holds=bounds["strict"],
        lower_bound_scope=bounds["scope"],
        divisibility_modulus=modulus,
        divisibility_holds=stats.linf % modulus == 0,
        square_term_folded=G.has_square_term,
        count_bound_note=_COUNT_NOTE,
        sweep=sweep,
    )


def _bound_fields(m: int, s: int, q: int, l4p4: int, n2: int, n8: int, linf: int) -> dict:
    """Exact-integer forms of the survey bounds.

    The 2^(s-1) factor is kept exact by multiplying both squared sides by 4:
    |x| <= C 2^(s-1) sqrt(t)  <=>  4 x^2 <= C^2 4^s t.
    """
    dev = l4p4 - 3 * q * q
    eval_holds = 4 * dev * dev <= 34225 * (4 ** s) * q ** 3        # 185^2 = 34225
    d8 = 8 * n8 - q
    n8_holds = 4 * d8 * d8 <= 33856 * (4 ** s) * q                 # (8*23)^2 = 33856
    d2 = abs(2 * n2 - q)
    n2_holds = d2 <= 2 or (d2 - 2) ** 2 <= 36 * q
    if m <= 11 + 2 * s:
        scope = "m<=11+2s"
    elif m >= 15 + 2 * s:
        scope = "m>=15+2s"
    else:
        scope = "gap(m=13+2s): no guarantee applies"
    return {
        "eval": eval_holds,
        "n8": n8_holds,
        "n2": n2_holds,
        "geq": linf * linf >= 2 * q,
        "strict": linf * linf > 2 * q,
        "scope": scope,
    }


def lower_bound_check(G: FamilyPolynomial) -> LowerBoundReport:
    """Spectral amplitude checks: sqrt(2q) bound, l4 inequality, divisibility.

    All comparisons are exact: 2q <= linf^2 stands in for sqrt(2q) <= linf.
    The case m = 13 + 2s sits between the two guaranteed ranges and is
    reported with scope "gap"; the comparisons are still evaluated.
    """
    f = G.field
    if f.m % 2 == 0:
        raise ValueError("lower_bound_check requires odd m")
    stats = boolfn.spectrum_stats(boolfn.walsh_transform(boolfn.from_trace_poly(G)))
    d = binary_degree(G)
    modulus = 1 << (-(-f.m // d))
    b = _bound_fields(f.m, G.s, f.q, stats.l4p4, 0, 0, stats.linf)
    return LowerBoundReport(
        m=f.m,
        s=G.s,
        q=f.q,
        linf=stats.linf,
        l4p4=stats.l4p4,
        geq_holds=b["geq"],
        strict_holds=b["strict"],
        l4_le_q_linf2=stats.l4p4 <= f.q * stats.linf * stats.linf,
        divisibility_modulus=modulus,
        divisibility_holds=stats.linf % modulus == 0,
        scope=b["scope"],
    )
