"""Pydantic request/response models for the HTTP service.

Field elements travel as 0x-prefixed lowercase hex strings of their masks.
Requests describe the field (m plus an optional reduction-polynomial
override), the polynomial (family coefficients a7/b or generic sparse
terms) and run options; responses mirror the documented report JSON layouts
one to one.  Hex parsing failures raise ValueError and surface as 400s.
"""

from __future__ import annotations

from pydantic import BaseModel, Field as PField, model_validator

from . import apn as apn_mod
from . import boolfn, curves, xalpha
from .gf2m import Field, FieldElement, field_params


# ----------------------------------------------------------------------
# Wire-format helpers
# ----------------------------------------------------------------------

def parse_hex(text: str, what: str = "value") -> int:
    try:
        value = int(text, 16)
    except (TypeError, ValueError):
        raise ValueError(f"malformed hex {what}: {text!r}") from None
    if value < 0:
        raise ValueError(f"negative hex {what}: {text!r}")
    return value


def hex_str(bits: int) -> str:
    return f"0x{bits:x}"


def build_field(m: int, poly: str | None) -> Field:
    return field_params(m, parse_hex(poly, "poly") if poly else None)


# ----------------------------------------------------------------------
# Requests
# ----------------------------------------------------------------------

class FieldRequest(BaseModel):
    m: int = PField(ge=2)
    poly: str | None = None


class BTermIn(BaseModel):
    i: int = PField(ge=0)
    coef: str


class TermIn(BaseModel):
    exp: int = PField(ge=0)
    coef: str


class PolynomialRequest(FieldRequest):
    """Either a family polynomial (a7 [+ b]) or a sparse one (terms)."""

    a7: str | None = None
    b: list[BTermIn] = []
    terms: list[TermIn] | None = None
    allow_square_term: bool = False

    @model_validator(mode="after")
    def _one_polynomial(self):
        if (self.a7 is None) == (self.terms is None):
            raise ValueError("give exactly one of a7 (family) or terms (sparse)")
        if self.terms is not None and self.b:
            raise ValueError("b terms only apply to the a7 family form")
        return self

    def build(self, field: Field):
        if self.a7 is not None:
            b = [(t.i, FieldElement(field, parse_hex(t.coef, f"b[{t.i}]"))) for t in self.b]
            return boolfn.FamilyPolynomial(
                FieldElement(field, parse_hex(self.a7, "a7")),
                b,
                allow_square_term=self.allow_square_term,
            )
        terms = [(t.exp, FieldElement(field, parse_hex(t.coef, f"coef[{t.exp}]"))) for t in self.terms]
        return boolfn.SparsePolynomial(field, terms)


class FamilyRequest(FieldRequest):
    """Family-only request; the derivative-curve analyses need odd m."""

    a7: str
    b: list[BTermIn] = []
    allow_square_term: bool = False

    @model_validator(mode="after")
    def _odd_m(self):
        if self.m % 2 == 0:
            raise ValueError("this analysis requires odd m")
        return self

    def build(self, field: Field) -> boolfn.FamilyPolynomial:
        b = [(t.i, FieldElement(field, parse_hex(t.coef, f"b[{t.i}]"))) for t in self.b]
        return boolfn.FamilyPolynomial(
            FieldElement(field, parse_hex(self.a7, "a7")),
            b,
            allow_square_term=self.allow_square_term,
        )


class SpectrumRequest(PolynomialRequest):
    pass


class CurveRequest(FieldRequest):
    a: str
    b: str
    c: str
    d: str

    def build(self, field: Field) -> curves.ArtinSchreierQuintic:
        return curves.ArtinSchreierQuintic(
            *(FieldElement(field, parse_hex(getattr(self, k), k)) for k in "abcd")
        )


class XalphaRequest(FamilyRequest):
    alpha: str | None = None   # omitted: exhaustive sweep
    workers: int = PField(default=1, ge=1)


class SurveyRequest(FamilyRequest):
    workers: int = PField(default=1, ge=1)
    include_records: bool = False


class BoundsRequest(FamilyRequest):
    pass


class ApnRequest(PolynomialRequest):
    workers: int = PField(default=1, ge=1)


# ----------------------------------------------------------------------
# Responses
# ----------------------------------------------------------------------

class FieldInfo(BaseModel):
    m: int
    q: int
    poly: str
    text: str

    @classmethod
    def from_core(cls, field: Field):
        return cls(m=field.m, q=field.q, poly=hex_str(field.reduction), text=field.text())


class StatsOut(BaseModel):
    m: int
    linf: int
    nl: int
    l2sq: int
    l4p4: int
    divisibility_modulus: int
    divisibility_holds: bool
    divisibility_per_coefficient: bool
    divisibility_witness: str | None


class SpectrumResponse(BaseModel):
    m: int
    poly: str
    stats: StatsOut
    values: list[int]


class CurveResponse(BaseModel):
    a: str
    b: str
    c: str
    d: str
    m: int
    poly: str
    w: int
    v_equals_w: bool
    count: int
    exp_sum: int
    admissible: list[int]
    q_zero_count: int

    @classmethod
    def from_core(cls, curve: curves.ArtinSchreierQuintic, rep: curves.QuadraticFormReport):
        f = curve.field
        return cls(
            a=curve.a.hex(), b=curve.b.hex(), c=curve.c.hex(), d=curve.d.hex(),
            m=f.m, poly=hex_str(f.reduction),
            w=rep.w, v_equals_w=rep.v_equals_w, count=rep.count_direct,
            exp_sum=rep.exp_sum, admissible=list(rep.admissible),
            q_zero_count=rep.q_zero_count,
        )


class AlphaRecordOut(BaseModel):
    alpha: str
    ell: str
    tr_ell: int
    x_alpha: int
    klass: str = PField(serialization_alias="class")

    @classmethod
    def from_core(cls, rec: xalpha.AlphaRecord):
        return cls(
            alpha=rec.alpha.hex(), ell=rec.ell.hex(), tr_ell=rec.tr_ell,
            x_alpha=rec.x_alpha, klass=rec.klass.value,
        )


class SweepRow(BaseModel):
    alpha_hex: str
    tr_ell: int
    x_alpha: int
    klass: str = PField(serialization_alias="class")


def sweep_rows(sweep: xalpha.AlphaSweep) -> list[SweepRow]:
    labels = sweep.klass_labels()
    return [
        SweepRow(alpha_hex=hex_str(a), tr_ell=t, x_alpha=x, klass=k)
        for a, t, x, k in zip(
            sweep.alphas.tolist(), sweep.tr_ell.tolist(), sweep.x_alpha.tolist(), labels
        )
    ]


class SurveyOut(BaseModel):
    m: int
    s: int
    q: int
    poly: str
    a7: str
    b: list[BTermIn]
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
    records: list[SweepRow] | None = None

    @classmethod
    def from_core(cls, rep: xalpha.SurveyReport):
        return cls(
            m=rep.m, s=rep.s, q=rep.q, poly=hex_str(rep.poly), a7=rep.a7,
            b=[BTermIn(i=i, coef=c) for i, c in rep.b],
            n0=rep.n0, n2=rep.n2, n8=rep.n8, sum_x_alpha=rep.sum_x_alpha,
            l4p4_curve=rep.l4p4_curve, l4p4_fwht=rep.l4p4_fwht, linf=rep.linf,
            bound_eval_holds=rep.bound_eval_holds,
            bound_n8_holds=rep.bound_n8_holds,
            bound_n2_holds=rep.bound_n2_holds,
            lower_bound_holds=rep.lower_bound_holds,
            strict_lower_holds=rep.strict_lower_holds,
            lower_bound_scope=rep.lower_bound_scope,
            divisibility_modulus=rep.divisibility_modulus,
            divisibility_holds=rep.divisibility_holds,
            square_term_folded=rep.square_term_folded,
            count_bound_note=rep.count_bound_note,
            records=sweep_rows(rep.sweep) if rep.sweep is not None else None,
        )


class XalphaResponse(BaseModel):
    record: AlphaRecordOut | None = None
    records: list[SweepRow] | None = None


class BoundsOut(BaseModel):
    m: int
    s: int
    q: int
    poly: str
    linf: int
    l4p4: int
    geq_holds: bool
    strict_holds: bool
    l4_le_q_linf2: bool
    divisibility_modulus: int
    divisibility_holds: bool
    scope: str

    @classmethod
    def from_core(cls, field: Field, rep: xalpha.LowerBoundReport):
        return cls(
            m=rep.m, s=rep.s, q=rep.q, poly=hex_str(field.reduction),
            linf=rep.linf, l4p4=rep.l4p4,
            geq_holds=rep.geq_holds, strict_holds=rep.strict_holds,
            l4_le_q_linf2=rep.l4_le_q_linf2,
            divisibility_modulus=rep.divisibility_modulus,
            divisibility_holds=rep.divisibility_holds,
            scope=rep.scope,
        )


class PredicateOut(BaseModel):
    verdict: str
    reason: str | None
    advisory: str | None


class ApnResponse(BaseModel):
    m: int
    poly: str
    delta: int
    is_apn: bool
    cv_sum: str     # decimal string: values reach ~2 q^3
    cv_bound: str
    cv_equality: bool
    predicate: PredicateOut

    @classmethod
    def from_core(cls, field: Field, rep: apn_mod.ApnReport):
        return cls(
            m=rep.m, poly=hex_str(field.reduction), delta=rep.delta,
            is_apn=rep.is_apn, cv_sum=str(rep.cv_sum), cv_bound=str(rep.cv_bound),
            cv_equality=rep.cv_equality,
            predicate=PredicateOut(
                verdict=rep.predicate.verdict,
                reason=rep.predicate.reason,
                advisory=rep.predicate.advisory,
            ),
        )


def stats_out(sp: boolfn.WalshSpectrum, degree: int) -> StatsOut:
    stats = boolfn.spectrum_stats(sp)
    div = boolfn.divisibility_check(sp, degree)
    return StatsOut(
        m=stats.m,
        linf=stats.linf,
        nl=stats.nl,
        l2sq=stats.l2sq,
        l4p4=stats.l4p4,
        divisibility_modulus=div.modulus,
        divisibility_holds=div.holds,
        divisibility_per_coefficient=div.per_coefficient_holds,
        divisibility_witness=hex_str(div.witness) if div.witness is not None else None,
    )
