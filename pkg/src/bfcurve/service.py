"""HTTP front end exposing every analysis of the core package.

All endpoints are POST with a JSON body and return the documented report
JSON.  Error mapping:

* request validation problems            -> 422 (FastAPI default)
* domain errors (bad hex, reducible
  override, even m, alpha = 0, ...)     -> 400 {"code": "bad-request"}
* internal cross-check failures          -> 500 {"code": "invariant-violation"}

The computations run synchronously; surveys and APN scans can take seconds
at large m, which is the intended usage for a local analysis service.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from . import __version__, boolfn, curves, xalpha
from . import apn as apn_mod
from . import schemas as sc
from .errors import InvariantViolationError

app = FastAPI(
    title="bfcurve",
    version=__version__,
    description="Boolean function spectra, quintic Artin-Schreier curve "
    "point counts, derivative-curve sweeps and APN analysis over GF(2^m).",
)


@app.exception_handler(InvariantViolationError)
async def _invariant_handler(request: Request, exc: InvariantViolationError):
    return JSONResponse(
        status_code=500,
        content={"code": "invariant-violation", "detail": str(exc)},
    )


@app.exception_handler(ValueError)
async def _value_error_handler(request: Request, exc: ValueError):
    return JSONResponse(
        status_code=400,
        content={"code": "bad-request", "detail": str(exc)},
    )


@app.get("/health")
def health():
    return {"status": "ok", "version": __version__}


@app.post("/field", response_model=sc.FieldInfo)
def field_info(req: sc.FieldRequest):
    return sc.FieldInfo.from_core(sc.build_field(req.m, req.poly))


@app.post("/spectrum", response_model=sc.SpectrumResponse)
def spectrum(req: sc.SpectrumRequest):
    field = sc.build_field(req.m, req.poly)
    poly = req.build(field)
    sp = boolfn.walsh_transform(boolfn.from_trace_poly(poly))
    degree = boolfn.binary_degree(poly)
    return sc.SpectrumResponse(
        m=field.m,
        poly=sc.hex_str(field.reduction),
        stats=sc.stats_out(sp, degree),
        values=sp.values.tolist(),
    )


@app.post("/curve", response_model=sc.CurveResponse)
def curve_report(req: sc.CurveRequest):
    field = sc.build_field(req.m, req.poly)
    curve = req.build(field)
    return sc.CurveResponse.from_core(curve, curves.analyze(curve))


@app.post("/xalpha", response_model=sc.XalphaResponse, response_model_exclude_none=True)
def xalpha_endpoint(req: sc.XalphaRequest):
    field = sc.build_field(req.m, req.poly)
    family = req.build(field)
    if req.alpha is not None:
        alpha = field.element(sc.parse_hex(req.alpha, "alpha"))
        rec = xalpha.classify_alpha(family, alpha)
        return sc.XalphaResponse(record=sc.AlphaRecordOut.from_core(rec))
    report = xalpha.survey(family, workers=req.workers, keep_sweep=True)
    return sc.XalphaResponse(records=sc.sweep_rows(report.sweep))


@app.post("/survey", response_model=sc.SurveyOut, response_model_exclude_none=True)
def survey_endpoint(req: sc.SurveyRequest):
    field = sc.build_field(req.m, req.poly)
    family = req.build(field)
    report = xalpha.survey(family, workers=req.workers, keep_sweep=req.include_records)
    return sc.SurveyOut.from_core(report)


@app.post("/bounds", response_model=sc.BoundsOut)
def bounds_endpoint(req: sc.BoundsRequest):
    field = sc.build_field(req.m, req.poly)
    family = req.build(field)
    return sc.BoundsOut.from_core(field, xalpha.lower_bound_check(family))


@app.post("/apn", response_model=sc.ApnResponse)
def apn_endpoint(req: sc.ApnRequest):
    field = sc.build_field(req.m, req.poly)
    poly = req.build(field)
    return sc.ApnResponse.from_core(field, apn_mod.apn_report(poly, workers=req.workers))
