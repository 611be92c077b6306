"""Spectrum tests: the fast transform against the naive double loop, the
Parseval/norm-chain identities in exact integers, and the family polynomial
surface.
"""

import random

import numpy as np
import pytest

from bfcurve import (
    CorruptedSpectrumError,
    FamilyPolynomial,
    SparsePolynomial,
    TruthTable,
    WalshSpectrum,
    binary_degree,
    divisibility_check,
    field_params,
    from_trace_poly,
    fwht,
    random_family,
    spectrum_csv,
    spectrum_stats,
    walsh_transform,
)
from bfcurve.boolfn import exact_power_sums


def naive_walsh(field, table):
    """O(q^2) reference transform under the Tr(v*x) pairing."""
    q = field.q
    out = []
    for v in range(q):
        acc = 0
        for x in range(q):
            acc += (-1) ** (int(table[x]) ^ field.trace(field.mul(v, x)))
        out.append(acc)
    return out


def rand_family(field, rng, s=None):
    if s is None:
        s = rng.randrange(0, min(3, field.m - 1) + 1)
    return random_family(field, s, rng)


# ----------------------------------------------------------------------
# Truth tables
# ----------------------------------------------------------------------

def test_zero_polynomial_gives_zero_table():
    f = field_params(4)
    tt = from_trace_poly(SparsePolynomial(f, []))
    assert tt.weight() == 0


def test_linear_term_is_balanced_trace_form():
    f = field_params(6)
    rng = random.Random(0)
    for _ in range(10):
        a = rng.randrange(1, f.q)
        tt = from_trace_poly(SparsePolynomial(f, [(1, f.element(a))]))
        assert tt.weight() == f.q // 2
        for x in range(f.q):
            assert int(tt.values[x]) == f.trace(f.mul(a, x))


def test_m3_cube_table_against_direct_evaluation():
    f = field_params(3)
    tt = from_trace_poly(SparsePolynomial(f, [(3, f.element(1))]))
    direct = [f.trace(f.pow(x, 3)) for x in range(8)]
    assert tt.values.tolist() == direct


def test_table_matches_scalar_eval_random():
    rng = random.Random(9)
    for m in (4, 7):
        f = field_params(m)
        exps = rng.sample(range(40), 3)
        sp = SparsePolynomial(
            f, [(e, f.element(rng.randrange(1, f.q))) for e in exps]
        )
        tt = from_trace_poly(sp)
        for _ in range(40):
            x = rng.randrange(f.q)
            assert int(tt.values[x]) == f.trace(sp.eval_bits(x))


def test_truth_table_shape_validation():
    f = field_params(3)
    with pytest.raises(ValueError):
        TruthTable(f, np.zeros(7, dtype=np.uint8))


# ----------------------------------------------------------------------
# Walsh transform
# ----------------------------------------------------------------------

def test_constant_zero_spectrum_is_single_spike():
    f = field_params(5)
    sp = walsh_transform(from_trace_poly(SparsePolynomial(f, [])))
    assert sp.values[0] == f.q
    assert np.count_nonzero(sp.values) == 1


def test_linear_form_spikes_at_its_coefficient():
    f = field_params(7)
    rng = random.Random(1)
    for _ in range(10):
        a = rng.randrange(1, f.q)
        sp = walsh_transform(from_trace_poly(SparsePolynomial(f, [(1, f.element(a))])))
        assert sp.values[a] == f.q
        assert np.count_nonzero(sp.values) == 1


def test_m3_cube_amplitude_is_sqrt_2q():
    f = field_params(3)
    sp = walsh_transform(from_trace_poly(SparsePolynomial(f, [(3, f.element(1))])))
    assert int(np.abs(sp.values).max()) == 4


@pytest.mark.parametrize("m", range(2, 9))
def test_fwht_equals_naive_double_loop(m):
    f = field_params(m)
    rng = random.Random(m)
    trials = 50 if m <= 6 else 10
    for _ in range(trials):
        table = np.array([rng.randrange(2) for _ in range(f.q)], dtype=np.uint8)
        fast = walsh_transform(TruthTable(f, table))
        assert fast.values.tolist() == naive_walsh(f, table)


@pytest.mark.parametrize("m", range(2, 9))
def test_pairing_change_is_a_multiset_invariance(m):
    f = field_params(m)
    rng = random.Random(100 + m)
    for _ in range(10):
        table = np.array([rng.randrange(2) for _ in range(f.q)], dtype=np.uint8)
        dot = fwht(1 - 2 * table.astype(np.int64))
        trace_paired = walsh_transform(TruthTable(f, table))
        assert sorted(dot.tolist()) == sorted(trace_paired.values.tolist())


# ----------------------------------------------------------------------
# Parseval and the norm chain
# ----------------------------------------------------------------------

@pytest.mark.parametrize("m", range(3, 11))
def test_parseval_and_chain_small_m(m):
    f = field_params(m)
    rng = random.Random(m * 17)
    for _ in range(30):
        sp = walsh_transform(from_trace_poly(rand_family(f, rng)))
        linf, s2, s4 = exact_power_sums(sp.values)
        assert s2 == f.q * f.q                      # Parseval
        assert s2 * s2 <= f.q * s4                  # l2 <= l4
        assert s4 <= linf * linf * s2               # l4 <= linf
        assert f.q <= linf * linf <= f.q * f.q      # sqrt(q) <= linf <= q


@pytest.mark.parametrize("m", range(11, 18))
def test_parseval_larger_m_100_random(m):
    f = field_params(m)
    rng = random.Random(m)
    for _ in range(100):
        sp = walsh_transform(from_trace_poly(rand_family(f, rng)))
        linf, s2, s4 = exact_power_sums(sp.values)
        assert s2 == f.q * f.q
        assert s2 * s2 <= f.q * s4 and s4 <= linf * linf * s2


def test_spectrum_values_are_even():
    f = field_params(6)
    rng = random.Random(4)
    for _ in range(20):
        sp = walsh_transform(from_trace_poly(rand_family(f, rng)))
        assert not np.any(sp.values & 1)


# ----------------------------------------------------------------------
# Stats
# ----------------------------------------------------------------------

def test_stats_linear_function_spike():
    for m in (4, 9):
        f = field_params(m)
        sp = walsh_transform(from_trace_poly(SparsePolynomial(f, [(1, f.element(3))])))
        st = spectrum_stats(sp)
        assert st.linf == f.q and st.nl == 0
        assert st.l2sq == f.q and st.l4p4 == f.q ** 3


def test_stats_m3_cube():
    f = field_params(3)
    st = spectrum_stats(walsh_transform(from_trace_poly(SparsePolynomial(f, [(3, f.element(1))]))))
    assert (st.l2sq, st.l4p4, st.nl, st.linf) == (8, 128, 2, 4)


def test_corrupted_spectrum_rejected():
    f = field_params(3)
    bad = WalshSpectrum(f, np.array([3, 0, 0, 0, 0, 0, 0, 0], dtype=np.int64))
    with pytest.raises(CorruptedSpectrumError):
        spectrum_stats(bad)


def test_exact_power_sums_beyond_int64():
    f = field_params(2)
    vals = np.array([1 << 20, -(1 << 20), 0, 0], dtype=np.int64)
    _, s2, s4 = exact_power_sums(vals)
    assert s2 == 2 * (1 << 40)
    assert s4 == 2 * (1 << 80)                      # exceeds int64 on purpose


# ----------------------------------------------------------------------
# Binary degree and divisibility
# ----------------------------------------------------------------------

def test_binary_degree_examples():
    f = field_params(9)
    one = f.element(1)
    assert binary_degree(SparsePolynomial(f, [(7, one)])) == 3
    for i in (1, 3, 5):
        assert binary_degree(SparsePolynomial(f, [((1 << i) + 1, one)])) == 2
    assert binary_degree(SparsePolynomial(f, [(5, one), (3, one)])) == 2
    with pytest.raises(ValueError):
        binary_degree(SparsePolynomial(f, []))
    assert binary_degree(FamilyPolynomial(one, [(2, one)])) == 3


def test_divisibility_family_m9():
    f = field_params(9)
    rng = random.Random(5)
    for _ in range(10):
        G = rand_family(f, rng)
        sp = walsh_transform(from_trace_poly(G))
        rep = divisibility_check(sp, binary_degree(G))
        assert rep.modulus == 8                     # 2^ceil(9/3)
        assert rep.holds


def test_divisibility_quadratic_family_odd_m():
    # binary degree 2: amplitude divisible by 2^((m+1)/2) = sqrt(2q)
    for m in (5, 7, 9):
        f = field_params(m)
        rng = random.Random(m)
        for _ in range(5):
            G = SparsePolynomial(f, [(3, f.element(rng.randrange(1, f.q)))])
            sp = walsh_transform(from_trace_poly(G))
            rep = divisibility_check(sp, 2)
            assert rep.modulus == 1 << ((m + 1) // 2)
            assert rep.holds and rep.per_coefficient_holds


def test_divisibility_constant_zero_function():
    f = field_params(6)
    sp = walsh_transform(from_trace_poly(SparsePolynomial(f, [])))
    rep = divisibility_check(sp, 3)
    assert rep.holds                                # linf = q
    with pytest.raises(ValueError):
        divisibility_check(sp, 0)


def test_divisibility_witness_reported():
    f = field_params(4)
    vals = np.zeros(f.q, dtype=np.int64)
    vals[0] = f.q
    vals[3] = 2
    vals[5] = -2
    sp = WalshSpectrum(f, vals)
    rep = divisibility_check(sp, 2)
    assert rep.modulus == 4
    assert rep.holds and not rep.per_coefficient_holds and rep.witness == 3


# ----------------------------------------------------------------------
# Family polynomial surface
# ----------------------------------------------------------------------

def test_family_validation():
    f = field_params(7)
    one = f.element(1)
    with pytest.raises(ValueError):
        FamilyPolynomial(f.element(0))
    with pytest.raises(ValueError):
        FamilyPolynomial(one, [(1, one), (1, one)])
    with pytest.raises(ValueError):
        FamilyPolynomial(one, [(7, one)])           # i > m-1
    with pytest.raises(ValueError):
        FamilyPolynomial(one, [(0, one)])           # needs the flag
    G = FamilyPolynomial(one, [(2, one), (1, f.element(0))])
    assert G.s == 2 and len(G.b) == 1               # zero coefficient dropped


def test_family_s_convention():
    f = field_params(9)
    one = f.element(1)
    assert FamilyPolynomial(one).s == 0
    assert FamilyPolynomial(one, [(3, one)]).s == 3
    G = FamilyPolynomial(one, [(0, one), (2, one)], allow_square_term=True)
    assert G.s == 2 and G.has_square_term


def test_square_term_folds_as_affine_shift():
    """An i=0 term permutes the spectrum but changes none of the statistics."""
    f = field_params(7)
    rng = random.Random(8)
    base = FamilyPolynomial(f.element(rng.randrange(1, f.q)), [(2, f.element(5))])
    shifted = FamilyPolynomial(base.a7, list(base.b) + [(0, f.element(9))],
                               allow_square_term=True)
    sp0 = walsh_transform(from_trace_poly(base))
    sp1 = walsh_transform(from_trace_poly(shifted))
    assert sorted(sp0.values.tolist()) == sorted(sp1.values.tolist())
    st0, st1 = spectrum_stats(sp0), spectrum_stats(sp1)
    assert (st0.linf, st0.l4p4) == (st1.linf, st1.l4p4)


def test_family_to_sparse_exponents():
    f = field_params(5)
    G = FamilyPolynomial(f.element(2), [(1, f.element(3)), (2, f.element(4))])
    assert [e for e, _ in G.to_sparse().terms] == [3, 5, 7]


def test_random_family_seed_determinism():
    f = field_params(9)
    a = random_family(f, 2, random.Random(42))
    b = random_family(f, 2, random.Random(42))
    assert a.a7 == b.a7 and a.b == b.b
    assert a.s == 2                                 # top coefficient forced nonzero


def test_spectrum_csv_layout():
    f = field_params(2)
    sp = walsh_transform(from_trace_poly(SparsePolynomial(f, [])))
    lines = spectrum_csv(sp).splitlines()
    assert lines[0] == "v_hex,walsh"
    assert lines[1] == "0x0,4"
    assert len(lines) == 1 + f.q
