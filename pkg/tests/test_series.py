import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from equidist import (
    CapacityError,
    Family,
    FamilySpec,
    ResidueClassSeries,
    SeriesError,
    coarsen,
    extract,
    family_series,
    grs_invert,
    grs_mul,
    grs_one,
    mul_factor_pow,
    row_sum,
)
from equidist.oracles import pentagonal_table, univariate_total
from equidist.series import MAX_LIMIT, build_family, f1_series, f3_series


def schoolbook(A, B):
    # reference double loop over (n, r) pairs; no numpy shifting
    N, b = A.N, A.b
    out = [[0] * b for _ in range(N + 1)]
    for n1 in range(N + 1):
        for r1 in range(b):
            x = A.coeffs[n1, r1]
            if not x:
                continue
            for n2 in range(N + 1 - n1):
                for r2 in range(b):
                    out[n1 + n2][(r1 + r2) % b] += x * B.coeffs[n2, r2]
    return ResidueClassSeries.from_rows(out)


@st.composite
def series_pair(draw):
    b = draw(st.integers(1, 7))
    N = draw(st.integers(0, 64))
    coeff = st.integers(-(10**6), 10**6)
    rows = lambda: [[draw(coeff) for _ in range(b)] for _ in range(N + 1)]
    return ResidueClassSeries.from_rows(rows()), ResidueClassSeries.from_rows(rows())


@settings(max_examples=120, deadline=None)
@given(series_pair())
def test_mul_matches_schoolbook(pair):
    A, B = pair
    assert grs_mul(A, B) == schoolbook(A, B)


@settings(max_examples=60, deadline=None)
@given(series_pair())
def test_invert_round_trip(pair):
    A, _ = pair
    rows = [list(A.coeffs[n]) for n in range(A.N + 1)]
    rows[0] = [1] + [0] * (A.b - 1)
    A = ResidueClassSeries.from_rows(rows)
    assert grs_mul(A, grs_invert(A)) == grs_one(A.b, A.N)


@settings(max_examples=60, deadline=None)
@given(series_pair())
def test_one_is_identity(pair):
    A, _ = pair
    assert grs_mul(A, grs_one(A.b, A.N)) == A


@settings(max_examples=40, deadline=None)
@given(
    st.integers(1, 7),
    st.integers(0, 30),
    st.integers(-3, 9),
    st.integers(1, 6),
    st.integers(-4, 4),
)
def test_factor_fold_matches_repeated_products(b, N, e, k, s):
    one = grs_one(b, N)
    step = mul_factor_pow(one, e, k, 1 if s > 0 else -1)
    want = one
    for _ in range(abs(s)):
        want = grs_mul(want, step)
    assert mul_factor_pow(one, e, k, s) == want


def test_one_examples():
    S = grs_one(2, 3)
    assert S.coeffs[0, 0] == 1 and sum(S.totals()) == 1
    assert grs_one(1, 0).coeffs.tolist() == [[1]]


def test_geometric_inverse():
    b, N = 3, 8
    one_minus_q = mul_factor_pow(grs_one(b, N), 0, 1, 1)
    geo = mul_factor_pow(grs_one(b, N), 0, 1, -1)
    assert grs_mul(one_minus_q, geo) == grs_one(b, N)
    assert grs_invert(one_minus_q) == geo
    assert [geo.extract(0, n) for n in range(N + 1)] == [1] * (N + 1)


@pytest.mark.parametrize("b", [2, 3, 5, 7])
def test_exponent_reduction(b):
    N = 4
    tq = ResidueClassSeries.from_rows([[0] * b, [0, 1] + [0] * (b - 2)] + [[0] * b] * (N - 1))
    tinv = ResidueClassSeries.from_rows([[0] * b, [0] * (b - 1) + [1]] + [[0] * b] * (N - 1))
    prod = grs_mul(tq, tinv)
    assert prod.extract(0, 2) == 1
    assert sum(prod.totals()) == 1


def test_inverse_of_one_minus_tq():
    S = mul_factor_pow(grs_one(2, 9), 1, 1, -1)
    for n in range(10):
        assert S.row(n) == ((1, 0) if n % 2 == 0 else (0, 1))


def test_invert_needs_unit_constant():
    bad = ResidueClassSeries.from_rows([[2, 0], [1, 0]])
    with pytest.raises(SeriesError):
        grs_invert(bad)


def test_f1_f3_first_coefficients():
    assert f1_series(2, 5).row(1) == (0, -1)
    for b in (2, 3, 6):
        assert f3_series(b, 5).row(1) == (-1,) + (0,) * (b - 1)


def test_f1_specialises_to_euler_function():
    N = 60
    p = pentagonal_table(N)
    euler = [0] * (N + 1)
    # (q;q) is the inverse of sum p(n) q^n
    euler[0] = 1
    for n in range(1, N + 1):
        euler[n] = -sum(p[k] * euler[n - k] for k in range(1, n + 1))
    assert f1_series(4, N).totals() == euler


def test_pp_trace_small_values():
    S = family_series(FamilySpec(Family.PP_TRACE, 2), 5)
    assert (extract(S, 0, 3), extract(S, 1, 3)) == (2, 4)
    assert S.totals() == [1, 1, 3, 6, 13, 24]


@pytest.mark.parametrize("fam", [Family.RANK, Family.CRANK])
def test_n4_uniform_mod5(fam):
    S = family_series(FamilySpec(fam, 5), 4)
    assert S.row(4) == (1, 1, 1, 1, 1)


def test_betti_x1_constant_term():
    for b in (3, 4, 7):
        S = family_series(FamilySpec(Family.BETTI_X1, b), 3)
        want = [0] * b
        want[0] += 1
        want[2 % b] += 1
        assert list(S.row(0)) == want


@pytest.mark.parametrize("fam", [f for f in Family if f not in (Family.BETTI_X1, Family.BETTI_X2)])
def test_constant_term_is_one(fam):
    spec = FamilySpec(fam, 4, 2 if fam is Family.BETTI_X4 else None)
    S = family_series(spec, 2)
    assert S.row(0) == (1, 0, 0, 0)


def test_row_sum_examples():
    p = pentagonal_table(40)
    assert family_series(FamilySpec(Family.RESIDUAL_CRANK, 3), 2).row_sum(2) == 4
    for fam in (Family.RANK, Family.CRANK, Family.GOETTSCHE_CELLS):
        S = family_series(FamilySpec(fam, 3), 40)
        assert S.totals() == p
    S = family_series(FamilySpec(Family.GOETTSCHE_CELLS, 3), 5)
    assert sum(extract(S, a, 5) for a in range(3)) == 7


ALL_SPECS = [
    FamilySpec(f, 2, 2 if f is Family.BETTI_X4 else None) for f in Family
]


@pytest.mark.parametrize("spec", ALL_SPECS, ids=lambda s: s.name)
@pytest.mark.parametrize("b", [2, 3, 6])
def test_conservation_small(spec, b):
    N = 80
    S = family_series(FamilySpec(spec.family, b, spec.m), N)
    assert S.totals() == univariate_total(spec.family, N, spec.m)


@pytest.mark.parametrize("fam", [Family.RANK, Family.PP_TRACE, Family.BETTI_X2, Family.CRANK])
def test_coarsening(fam):
    N = 40
    fine = family_series(FamilySpec(fam, 12), N)
    for d in (2, 3, 4, 6):
        assert coarsen(fine, d) == family_series(FamilySpec(fam, d), N)


def test_b1_gives_totals():
    N = 30
    S = build_family(Family.PP_TRACE, 1, N)
    assert S.coeffs[:, 0].tolist() == univariate_total(Family.PP_TRACE, N)


@pytest.mark.parametrize("fam", [Family.BETTI_X1, Family.BETTI_X2, Family.BETTI_X3, Family.BETTI_X4])
def test_betti_odd_classes_vanish(fam):
    S = family_series(FamilySpec(fam, 6, 3 if fam is Family.BETTI_X4 else None), 120)
    assert not np.any(S.coeffs[:, 1::2])


@pytest.mark.parametrize("fam", list(Family))
def test_nonnegative(fam):
    S = family_series(FamilySpec(fam, 5, 1 if fam is Family.BETTI_X4 else None), 120)
    rows = range(121) if fam is not Family.CRANK else [n for n in range(121) if n != 1]
    assert all(v >= 0 for n in rows for v in S.coeffs[n])


def test_crank_n1_anomaly():
    # the product gives t + 1/t - 1 at q^1, not the single partition of 1
    S = family_series(FamilySpec(Family.CRANK, 5), 2)
    assert S.row(1) == (-1, 1, 0, 0, 1)


def test_csv_round_trip():
    S = family_series(FamilySpec(Family.RANK, 4), 25)
    text = S.to_csv()
    assert text.splitlines()[0] == "n,r0,r1,r2,r3,total"
    assert ResidueClassSeries.from_csv(text) == S


def test_csv_rejects_bad_total():
    with pytest.raises(SeriesError):
        ResidueClassSeries.from_csv("n,r0,r1,total\n0,1,0,2\n")


def test_range_errors():
    S = grs_one(3, 4)
    with pytest.raises(SeriesError):
        extract(S, 3, 0)
    with pytest.raises(SeriesError):
        extract(S, 0, 5)
    with pytest.raises(SeriesError):
        row_sum(S, -1)
    with pytest.raises(SeriesError):
        mul_factor_pow(S, 0, 0, 1)
    with pytest.raises(CapacityError):
        grs_one(2, MAX_LIMIT + 1)
    with pytest.raises(SeriesError):
        grs_mul(grs_one(2, 3), grs_one(3, 3))
    with pytest.raises(SeriesError):
        coarsen(S, 2)


def test_series_is_read_only():
    S = grs_one(2, 2)
    with pytest.raises(ValueError):
        S.coeffs[0, 0] = 5
