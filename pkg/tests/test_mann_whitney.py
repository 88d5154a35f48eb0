import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ineqnet import mann_whitney_upper

from oracles import brute_mw_upper_p, wins_u


class TestKnownValues:
    def test_separated_three_vs_three(self):
        result = mann_whitney_upper([5, 6, 7], [1, 2, 3], alpha=0.05)
        assert result.u_statistic == 9.0
        assert result.p_value == pytest.approx(1 / 20)  # 1 of C(6,3) labelings
        assert result.method == "exact"
        assert result.reject  # boundary case p == alpha rejects

    def test_separated_two_vs_two(self):
        result = mann_whitney_upper([10, 20], [1, 2], alpha=0.05)
        assert result.u_statistic == 4.0
        assert result.p_value == pytest.approx(1 / 6)
        assert not result.reject

    def test_identical_samples(self):
        result = mann_whitney_upper([1, 2, 3], [1, 2, 3])
        assert result.p_value >= 0.5
        assert not result.reject

    def test_identical_constant_large_samples(self):
        # degenerate tie-corrected variance in the approximate path
        result = mann_whitney_upper([5.0] * 30, [5.0] * 30)
        assert result.method == "normal_approx"
        assert result.p_value == 1.0
        assert not result.reject

    def test_empty_raises(self):
        with pytest.raises(ValueError):
            mann_whitney_upper([], [1])
        with pytest.raises(ValueError):
            mann_whitney_upper([1], [])

    def test_method_switch(self):
        small = mann_whitney_upper(list(range(10)), list(range(10)))
        big = mann_whitney_upper(list(range(11)), list(range(5)))
        assert small.method == "exact"
        assert big.method == "normal_approx"


small_sample = st.lists(st.sampled_from([1.0, 2.0, 3.0]), min_size=1, max_size=6)


@given(small_sample, small_sample)
@settings(max_examples=150, deadline=None)
def test_exact_p_matches_enumeration(a, b):
    result = mann_whitney_upper(a, b)
    assert result.method == "exact"
    assert result.p_value == pytest.approx(brute_mw_upper_p(a, b), abs=1e-12)


any_sample = st.lists(
    st.one_of(st.sampled_from([0.0, 1.0, 2.0]), st.floats(0, 100, allow_nan=False)),
    min_size=1,
    max_size=25,
)


@given(any_sample, any_sample)
@settings(max_examples=150, deadline=None)
def test_u_complement(a, b):
    u_ab = mann_whitney_upper(a, b).u_statistic
    u_ba = mann_whitney_upper(b, a).u_statistic
    assert u_ab + u_ba == len(a) * len(b)
    assert u_ab == wins_u(a, b)


def test_normal_approx_tracks_exact():
    # the approximation should land close to the exact tail for mid sizes
    rng = np.random.default_rng(3)
    for _ in range(30):
        a = list(rng.normal(0.5, 1, size=9))
        b = list(rng.normal(0.0, 1, size=9))
        exact = mann_whitney_upper(a, b).p_value
        approx = mann_whitney_upper(a + a[:2], b + b[:2]).method
        assert approx == "normal_approx"
        # sanity: exact p is a valid probability
        assert 0.0 <= exact <= 1.0


def test_p_value_monotone_in_shift():
    base = [1.0, 2.0, 3.0, 4.0, 5.0]
    p_prev = 1.0
    for shift in (0.0, 1.0, 3.0, 10.0):
        p = mann_whitney_upper([x + shift for x in base], base).p_value
        assert p <= p_prev + 1e-12
        p_prev = p
