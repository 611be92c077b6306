"""Command-line client for the bfcurve service.

The CLI builds the same request bodies the HTTP API takes and, by default,
executes them against an in-process instance of the service app; pass
``--server http://host:port`` to talk to a running instance instead.
Reports go to stdout (JSON, or CSV where a command defines one),
diagnostics to stderr.

Exit codes: 0 success, 1 usage/input error, 2 invariant violation detected
during analysis.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys

import httpx

FORMATS = ("json", "csv")


class _Parser(argparse.ArgumentParser):
    """argparse exits with status 2 on usage errors; the contract wants 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _default_workers() -> int:
    env = os.environ.get("BFCURVE_WORKERS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            print(f"warning: ignoring bad BFCURVE_WORKERS={env!r}", file=sys.stderr)
    return os.cpu_count() or 1


def _parse_pairs(text: str, key: str, what: str) -> list[dict]:
    """Parse ``k:hex[,k:hex...]`` lists, e.g. --b 1:0x3,2:0x5 or --terms 7:0x1."""
    out = []
    for piece in text.split(","):
        piece = piece.strip()
        if not piece:
            continue
        try:
            left, right = piece.split(":", 1)
            out.append({key: int(left), "coef": right})
        except ValueError:
            raise SystemExit(_fail(f"malformed {what} entry {piece!r}; expected k:hex"))
    return out


def _fail(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return 1


def _client(server: str | None):
    if server:
        return httpx.Client(base_url=server, timeout=None)
    import warnings

    with warnings.catch_warnings():
        # keep stderr clean: the in-process test transport warns about the
        # httpx version pairing on some starlette releases
        warnings.simplefilter("ignore")
        from fastapi.testclient import TestClient  # in-process ASGI transport

    from .service import app

    return TestClient(app)


def _post(client, path: str, payload: dict):
    """POST and map HTTP status to (exit_code, body)."""
    resp = client.post(path, json=payload)
    try:
        body = resp.json()
    except ValueError:
        body = {"detail": resp.text}
    if resp.status_code == 200:
        return 0, body
    detail = body.get("detail", body)
    if resp.status_code == 500 and body.get("code") == "invariant-violation":
        print(f"invariant violation: {detail}", file=sys.stderr)
        return 2, None
    print(f"error: {detail}", file=sys.stderr)
    return 1, None


def _emit_json(data) -> None:
    print(json.dumps(data, indent=2))


# ----------------------------------------------------------------------
# Argument wiring
# ----------------------------------------------------------------------

def _add_field_args(p):
    p.add_argument("--m", type=int, required=True, help="extension degree of GF(2^m)")
    p.add_argument("--poly", help="reduction polynomial override, hex mask")


def _add_family_args(p):
    p.add_argument("--a7", help="coefficient of x^7, hex")
    p.add_argument("--b", help="quadratic-part coefficients, i:hex[,i:hex...]")
    p.add_argument("--allow-square-term", action="store_true",
                   help="accept an i=0 term (folded in as an affine shift)")


def build_parser() -> _Parser:
    parser = _Parser(prog="bfcurve", description=__doc__.split("\n\n")[0])
    parser.add_argument("--server", help="base URL of a running service; default in-process")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("field", help="print field parameters")
    _add_field_args(p)

    p = sub.add_parser("spectrum", help="Walsh spectrum dump and stats")
    _add_field_args(p)
    _add_family_args(p)
    p.add_argument("--terms", help="sparse polynomial, exp:hex[,exp:hex...]")
    p.add_argument("--format", choices=FORMATS, default="json")

    p = sub.add_parser("curve", help="quadratic-form report of a quintic curve")
    _add_field_args(p)
    for coef in "abcd":
        p.add_argument(f"--{coef}", required=True, help=f"coefficient {coef}, hex")

    p = sub.add_parser("xalpha", help="classify one alpha or sweep all of k*")
    _add_field_args(p)
    _add_family_args(p)
    p.add_argument("--alpha", help="single alpha to classify, hex")
    p.add_argument("--all", action="store_true", help="exhaustive alpha sweep")
    p.add_argument("--workers", type=int)
    p.add_argument("--format", choices=FORMATS, default="json")

    p = sub.add_parser("survey", help="full alpha survey with bound checks")
    _add_field_args(p)
    _add_family_args(p)
    p.add_argument("--random", type=int, metavar="N", help="survey N random family polynomials")
    p.add_argument("--seed", type=int, default=0, help="rng seed for --random")
    p.add_argument("--s", type=int, default=0, help="family parameter s for --random")
    p.add_argument("--workers", type=int)
    p.add_argument("--format", choices=FORMATS, default="json")

    p = sub.add_parser("bounds", help="spectral amplitude lower-bound checks")
    _add_field_args(p)
    _add_family_args(p)

    p = sub.add_parser("apn", help="differential uniformity and CV criterion")
    _add_field_args(p)
    _add_family_args(p)
    p.add_argument("--terms", help="sparse polynomial, exp:hex[,exp:hex...]")
    p.add_argument("--workers", type=int)

    return parser


def _family_payload(args) -> dict:
    payload = {"m": args.m, "poly": args.poly, "a7": args.a7, "b": []}
    if args.b:
        payload["b"] = _parse_pairs(args.b, "i", "--b")
    if getattr(args, "allow_square_term", False):
        payload["allow_square_term"] = True
    return payload


def _poly_payload(args) -> dict:
    """Family or sparse polynomial body for spectrum/apn."""
    terms = getattr(args, "terms", None)
    if (args.a7 is None) == (terms is None):
        raise SystemExit(_fail("give exactly one of --a7 (family) or --terms (sparse)"))
    if terms is not None:
        return {"m": args.m, "poly": args.poly, "terms": _parse_pairs(terms, "exp", "--terms")}
    return _family_payload(args)


def _random_families(m: int, s: int, count: int, seed: int) -> list[dict]:
    """Seed-determined family coefficient draws (b_s forced nonzero)."""
    q = 1 << m
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        body = {"a7": f"0x{rng.randrange(1, q):x}", "b": []}
        for i in range(1, s + 1):
            lo = 1 if i == s else 0
            body["b"].append({"i": i, "coef": f"0x{rng.randrange(lo, q):x}"})
        out.append(body)
    return out


def _records_csv(rows: list[dict]) -> str:
    lines = ["alpha_hex,tr_ell,x_alpha,class"]
    lines += [f"{r['alpha_hex']},{r['tr_ell']},{r['x_alpha']},{r['class']}" for r in rows]
    return "\n".join(lines) + "\n"


# ----------------------------------------------------------------------
# Command runners
# ----------------------------------------------------------------------

def _run_field(client, args) -> int:
    code, body = _post(client, "/field", {"m": args.m, "poly": args.poly})
    if code == 0:
        _emit_json(body)
    return code


def _run_spectrum(client, args) -> int:
    code, body = _post(client, "/spectrum", _poly_payload(args))
    if code:
        return code
    if args.format == "csv":
        rows = ["v_hex,walsh"]
        rows += [f"0x{v:x},{w}" for v, w in enumerate(body["values"])]
        sys.stdout.write("\n".join(rows) + "\n")
    else:
        _emit_json(body)
    return 0


def _run_curve(client, args) -> int:
    payload = {"m": args.m, "poly": args.poly,
               "a": args.a, "b": args.b, "c": args.c, "d": args.d}
    code, body = _post(client, "/curve", payload)
    if code == 0:
        _emit_json(body)
    return code


def _run_xalpha(client, args) -> int:
    if bool(args.alpha) == bool(args.all):
        return _fail("give exactly one of --alpha HEX or --all")
    payload = _family_payload(args)
    payload["workers"] = args.workers or _default_workers()
    if args.alpha:
        payload["alpha"] = args.alpha
    code, body = _post(client, "/xalpha", payload)
    if code:
        return code
    if args.all and args.format == "csv":
        sys.stdout.write(_records_csv(body["records"]))
    else:
        _emit_json(body)
    return 0


def _run_survey(client, args) -> int:
    workers = args.workers or _default_workers()
    want_csv = args.format == "csv"
    if args.random is not None:
        if args.a7:
            return _fail("--random and --a7 are mutually exclusive")
        if want_csv and args.random != 1:
            return _fail("csv output supports exactly one survey; use --random 1")
        draws = _random_families(args.m, args.s, args.random, args.seed)
        reports = []
        for draw in draws:
            payload = {"m": args.m, "poly": args.poly, "workers": workers,
                       "include_records": want_csv, **draw}
            code, body = _post(client, "/survey", payload)
            if code:
                return code
            reports.append(body)
        if want_csv:
            sys.stdout.write(_records_csv(reports[0]["records"]))
        else:
            _emit_json(reports)
        return 0
    if not args.a7:
        return _fail("give --a7 (with optional --b) or --random N")
    payload = _family_payload(args)
    payload["workers"] = workers
    payload["include_records"] = want_csv
    code, body = _post(client, "/survey", payload)
    if code:
        return code
    if want_csv:
        sys.stdout.write(_records_csv(body["records"]))
    else:
        body.pop("records", None)
        _emit_json(body)
    return 0


def _run_bounds(client, args) -> int:
    if not args.a7:
        return _fail("bounds requires --a7")
    code, body = _post(client, "/bounds", _family_payload(args))
    if code == 0:
        _emit_json(body)
    return code


def _run_apn(client, args) -> int:
    payload = _poly_payload(args)
    payload["workers"] = args.workers or _default_workers()
    code, body = _post(client, "/apn", payload)
    if code == 0:
        _emit_json(body)
    return code


_RUNNERS = {
    "field": _run_field,
    "spectrum": _run_spectrum,
    "curve": _run_curve,
    "xalpha": _run_xalpha,
    "survey": _run_survey,
    "bounds": _run_bounds,
    "apn": _run_apn,
}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    client = _client(args.server)
    try:
        return _RUNNERS[args.command](client, args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    except httpx.HTTPError as exc:
        return _fail(f"transport failure: {exc}")
    finally:
        client.close()


if __name__ == "__main__":
    sys.exit(main())
