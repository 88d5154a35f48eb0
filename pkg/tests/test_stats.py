import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ineqnet import (
    ContingencyTable,
    chi_square_independence,
    gini,
    pearson_r,
)
from ineqnet.errors import DegenerateMarginError, DegenerateSeriesError
from ineqnet.stats import Interval, substream

from oracles import brute_gini, brute_pearson


class TestGini:
    def test_perfect_equality(self):
        assert gini([3, 3, 3]) == 0.0

    def test_two_point(self):
        assert gini([0, 1]) == pytest.approx(0.5, abs=1e-12)

    def test_four_point(self):
        assert gini([1, 2, 3, 4]) == pytest.approx(0.25, abs=1e-12)

    def test_all_zero_convention(self):
        assert gini([0, 0, 0]) == 0.0

    def test_empty_raises(self):
        with pytest.raises(ValueError):
            gini([])

    def test_negative_raises_without_flag(self):
        with pytest.raises(ValueError):
            gini([1, -1])
        # unclamped when the caller opted in: can exceed 1 - 1/n
        assert gini([10, -9, 1], allow_negative=True) > 1.0

    def test_matches_quadratic_oracle(self):
        rng = np.random.default_rng(42)
        for _ in range(200):
            x = rng.uniform(0, 1000, size=rng.integers(1, 50))
            assert gini(x) == pytest.approx(brute_gini(x), abs=1e-10)

    def test_upper_bound(self):
        # all wealth in one hand: G = 1 - 1/n
        for n in (2, 5, 17):
            x = [0.0] * (n - 1) + [100.0]
            assert gini(x) == pytest.approx(1 - 1 / n, abs=1e-12)


positive_samples = st.lists(
    st.floats(0.001, 1e6, allow_nan=False), min_size=2, max_size=30
)


@given(positive_samples, st.floats(0.01, 100))
def test_gini_scale_invariance(xs, c):
    assert gini([c * x for x in xs]) == pytest.approx(gini(xs), abs=1e-9)


@given(positive_samples, st.integers(2, 4))
def test_gini_replication_invariance(xs, k):
    assert gini(xs * k) == pytest.approx(gini(xs), abs=1e-12)


@given(st.lists(st.floats(0.1, 1e3, allow_nan=False), min_size=2, max_size=30))
def test_gini_transfer_principle(xs):
    # moving eps from a poorer to a richer individual strictly increases G
    xs = sorted(xs)
    if xs[0] == xs[-1]:
        xs[-1] += 1.0
    eps = xs[0] / 2
    transferred = list(xs)
    transferred[0] -= eps
    transferred[-1] += eps
    assert gini(transferred) > gini(xs)


class TestPearson:
    def test_exact_linearity(self):
        assert pearson_r([1, 2, 3], [2, 4, 6]) == pytest.approx(1.0)

    def test_exact_anti_linearity(self):
        assert pearson_r([1, 2, 3], [-2, -4, -6]) == pytest.approx(-1.0)

    def test_four_point_value(self):
        xs, ys = [1, 2, 3, 4], [2, 1, 4, 3]
        assert pearson_r(xs, ys) == pytest.approx(0.6, abs=1e-12)
        assert pearson_r(xs, ys) == pytest.approx(brute_pearson(xs, ys), abs=1e-12)

    def test_degenerate_series(self):
        with pytest.raises(DegenerateSeriesError):
            pearson_r([1, 1, 1], [1, 2, 3])

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            pearson_r([1, 2], [1, 2, 3])


series_st = st.lists(st.floats(-1e3, 1e3, allow_nan=False), min_size=3, max_size=20)


@given(st.tuples(series_st, series_st).map(lambda t: (t[0], t[1][: len(t[0])])))
@settings(max_examples=60)
def test_pearson_symmetry_and_sign(pair):
    xs, ys = pair
    ys = ys + [0.0] * (len(xs) - len(ys))
    try:
        r = pearson_r(xs, ys)
    except DegenerateSeriesError:
        return
    assert -1.0 <= r <= 1.0
    assert pearson_r(ys, xs) == pytest.approx(r, abs=1e-12)
    assert pearson_r(xs, [-y for y in ys]) == pytest.approx(-r, abs=1e-9)


class TestChiSquare:
    def test_exact_independence(self):
        t = ContingencyTable(("a", "b"), ("x", "y"), ((10, 10), (10, 10)))
        result = chi_square_independence(t)
        assert result.statistic == pytest.approx(0.0, abs=1e-12)
        assert not result.reject

    def test_two_by_two_closed_form(self):
        # n(ad-bc)^2 / (r1 r2 c1 c2) = 50 * 375^2 / 25^4 = 18
        t = ContingencyTable(("a", "b"), ("x", "y"), ((20, 5), (5, 20)))
        result = chi_square_independence(t, alpha=0.05)
        assert result.statistic == pytest.approx(18.0, abs=1e-9)
        assert result.dof == 1
        assert result.reject

    def test_proportional_rows(self):
        t = ContingencyTable(("a", "b"), ("x", "y", "z"), ((10, 20, 30), (5, 10, 15)))
        result = chi_square_independence(t)
        assert result.statistic == pytest.approx(0.0, abs=1e-12)

    def test_zero_margin_raises(self):
        t = ContingencyTable(("a", "b"), ("x", "y"), ((0, 10), (0, 20)))
        with pytest.raises(DegenerateMarginError):
            chi_square_independence(t)

    def test_low_expected_count_flag(self):
        t = ContingencyTable(("a", "b"), ("x", "y"), ((2, 3), (3, 2)))
        assert chi_square_independence(t).low_expected_count

    def test_table_validation(self):
        with pytest.raises(ValueError):
            ContingencyTable(("a",), ("x", "y"), ((1, 2),))
        with pytest.raises(ValueError):
            ContingencyTable(("a", "b"), ("x", "y"), ((1, -2), (3, 4)))


class TestInterval:
    def test_ordering_enforced(self):
        with pytest.raises(ValueError):
            Interval(lower=2.0, upper=1.0, level=0.95)

    def test_degenerate_allowed(self):
        ci = Interval(lower=5.0, upper=5.0, level=0.95)
        assert ci.lower == ci.upper


class TestSubstream:
    def test_deterministic(self):
        a = substream(7, "x", "y").integers(0, 1 << 30, size=8)
        b = substream(7, "x", "y").integers(0, 1 << 30, size=8)
        assert (a == b).all()

    def test_key_sensitivity(self):
        a = substream(7, "x", "y").integers(0, 1 << 30, size=8)
        b = substream(7, "x", "z").integers(0, 1 << 30, size=8)
        c = substream(8, "x", "y").integers(0, 1 << 30, size=8)
        assert not (a == b).all()
        assert not (a == c).all()
