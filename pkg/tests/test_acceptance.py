"""Acceptance suite: one test per criterion, exact-integer comparisons only.

Each test prints a ``criterion NN ...: PASS`` line (visible with ``pytest
-s``) and enforces the stated wall-clock budget.  Shared corpora are built
once per module in fixtures; their build time is charged to the criterion
that mandates the computation.

Run with::

    pytest tests/test_acceptance.py -v -s
"""

import random
import time

import numpy as np
import pytest

from bfcurve import (
    ArtinSchreierQuintic,
    FamilyPolynomial,
    SparsePolynomial,
    analyze,
    cv_sum,
    differential_uniformity,
    field_params,
    from_trace_poly,
    lower_bound_check,
    random_family,
    survey,
    walsh_transform,
)
from bfcurve.boolfn import exact_power_sums

PARSEVAL_MS = (3, 5, 7, 9, 11, 13, 15)
SURVEY_MS = (5, 7, 9, 11, 13)


def _passed(num, desc, elapsed=None, limit=None):
    timing = ""
    if elapsed is not None:
        timing = f" [{elapsed:.2f}s" + (f" < {limit}s]" if limit else "]")
    print(f"criterion {num:02d} ({desc}): PASS{timing}", flush=True)


# ----------------------------------------------------------------------
# Corpora
# ----------------------------------------------------------------------

@pytest.fixture(scope="module")
def parseval_corpus():
    """(q, linf, sum fhat^2, sum fhat^4) for 100 random family G per m."""
    entries = []
    t0 = time.monotonic()
    for m in PARSEVAL_MS:
        f = field_params(m)
        rng = random.Random(1000 + m)
        for k in range(100):
            s = min(k % 3, f.m - 1)
            sp = walsh_transform(from_trace_poly(random_family(f, s, rng)))
            linf, s2, s4 = exact_power_sums(sp.values)
            entries.append((f.q, linf, s2, s4))
    return {"entries": entries, "elapsed": time.monotonic() - t0}


@pytest.fixture(scope="module")
def survey_corpus():
    """20 exhaustive alpha surveys per m in {5,...,13}, s cycling 0,1,2."""
    reports = []
    t0 = time.monotonic()
    for m in SURVEY_MS:
        f = field_params(m)
        rng = random.Random(2000 + m)
        for k in range(20):
            G = random_family(f, k % 3, rng)
            reports.append(survey(G, keep_sweep=True))
    return {"reports": reports, "elapsed": time.monotonic() - t0}


# ----------------------------------------------------------------------
# Criteria
# ----------------------------------------------------------------------

def test_criterion_01_parseval(parseval_corpus):
    for q, _, s2, _ in parseval_corpus["entries"]:
        assert s2 == q * q          # (1/q) sum fhat^2 == q, cross-multiplied
    elapsed = parseval_corpus["elapsed"]
    assert elapsed < 5.0
    _passed(1, "Parseval, 100 random G per m in {3..15}", elapsed, 5)


def test_criterion_02_norm_chain(parseval_corpus):
    t0 = time.monotonic()
    for q, linf, s2, s4 in parseval_corpus["entries"]:
        assert s2 * s2 <= q * s4
        assert s4 <= linf * linf * s2
    elapsed = time.monotonic() - t0
    assert elapsed < 1.0
    _passed(2, "norm chain on the same corpus", elapsed, 1)


def test_criterion_03_curve_count_triangle():
    t0 = time.monotonic()
    checked = 0
    for m in (3, 5, 7, 9, 11):
        f = field_params(m)
        rng = random.Random(3000 + m)
        for _ in range(1000):
            curve = ArtinSchreierQuintic(
                f.element(rng.randrange(1, f.q)),
                f.element(rng.randrange(f.q)),
                f.element(rng.randrange(f.q)),
                f.element(rng.randrange(f.q)),
            )
            rep = analyze(curve)
            assert rep.count_direct == 1 + f.q + rep.exp_sum
            assert rep.count_direct in rep.admissible
            checked += 1
    elapsed = time.monotonic() - t0
    assert checked == 5000 and elapsed < 30.0
    _passed(3, "count triangle, 1000 random curves per odd m <= 11", elapsed, 30)


def test_criterion_04_x_alpha_value_set(survey_corpus):
    for rep in survey_corpus["reports"]:
        allowed = {0, 2 * rep.q, 8 * rep.q}
        assert set(np.unique(rep.sweep.x_alpha).tolist()) <= allowed
        assert len(rep.sweep.alphas) == rep.q - 1
    elapsed = survey_corpus["elapsed"]
    assert elapsed < 60.0
    _passed(4, "X_alpha in {0,2q,8q}, 20 G per m in {5..13}", elapsed, 60)


def test_criterion_05_two_q_criterion(survey_corpus):
    for rep in survey_corpus["reports"]:
        two_q = rep.sweep.x_alpha == 2 * rep.q
        tr_one = rep.sweep.tr_ell == 1
        assert np.array_equal(two_q, tr_one)
    _passed(5, "Tr(l)=1 iff X_alpha=2q, zero exceptions")


def test_criterion_06_l4_identity(survey_corpus):
    for rep in survey_corpus["reports"]:
        assert rep.l4p4_fwht == rep.q * rep.q + int(rep.sweep.x_alpha.sum())
        assert rep.l4p4_fwht == rep.l4p4_curve
    _passed(6, "l4p4 = q^2 + sum X_alpha, exact")


def test_criterion_07_eval_bounds(survey_corpus):
    seen = set()
    for rep in survey_corpus["reports"]:
        seen.add((rep.m, rep.s))
        dev = rep.l4p4_fwht - 3 * rep.q * rep.q
        assert 4 * dev * dev <= 34225 * (4 ** rep.s) * rep.q ** 3
        assert rep.bound_eval_holds
        d8 = 8 * rep.n8 - rep.q
        assert 4 * d8 * d8 <= 33856 * (4 ** rep.s) * rep.q
        assert rep.bound_n8_holds
        d2 = abs(2 * rep.n2 - rep.q)
        assert d2 <= 2 or (d2 - 2) ** 2 <= 36 * rep.q
        assert rep.bound_n2_holds
    assert {(m, s) for m in SURVEY_MS for s in (0, 1, 2)} <= seen
    _passed(7, "fourth-moment and n8/n2 count bounds, s in {0,1,2}")


def test_criterion_08_amplitude_lower_bounds():
    t0 = time.monotonic()
    for m in (5, 7, 9, 11):
        f = field_params(m)
        rng = random.Random(8000 + m)
        for _ in range(20):
            rep = lower_bound_check(FamilyPolynomial(f.element(rng.randrange(1, f.q))))
            assert rep.linf * rep.linf >= 2 * f.q
    f15 = field_params(15)
    rng = random.Random(8150)
    for _ in range(20):
        rep = lower_bound_check(FamilyPolynomial(f15.element(rng.randrange(1, f15.q))))
        assert rep.linf * rep.linf > 2 * f15.q          # strict for m >= 15+2s
        assert rep.linf % 32 == 0                        # 2^ceil(15/3)
        assert rep.divisibility_holds
    elapsed = time.monotonic() - t0
    assert elapsed < 10.0
    _passed(8, "sqrt(2q) lower bound, strict at m=15, divisibility", elapsed, 10)


def test_criterion_09_apn_triangle():
    t0 = time.monotonic()
    for m in (3, 5, 7, 9):
        f = field_params(m)
        gold = SparsePolynomial(f, [(3, f.element(1))])
        assert differential_uniformity(gold) == 2
        rep = cv_sum(gold)
        assert rep.cv_sum == 2 * f.q * f.q * (f.q - 1)
        assert rep.equality
    for m in (7, 9):
        f = field_params(m)
        rng = random.Random(9000 + m)
        for k in range(20):
            G = random_family(f, k % 3, rng)
            delta = differential_uniformity(G)
            assert (delta <= 2) == cv_sum(G).equality
    elapsed = time.monotonic() - t0
    assert elapsed < 60.0
    _passed(9, "delta=2 and exact CV equality for Gold; triangle on random G", elapsed, 60)


def test_criterion_10_non_apn_desk_check():
    t0 = time.monotonic()
    for m in (11, 13):
        f = field_params(m)
        rng = random.Random(10000 + m)
        for _ in range(10):
            G = FamilyPolynomial(f.element(rng.randrange(1, f.q)))  # s = 0
            assert differential_uniformity(G) >= 4
    elapsed = time.monotonic() - t0
    assert elapsed < 120.0
    _passed(10, "delta >= 4 for s=0 family at m in {11,13}", elapsed, 120)
