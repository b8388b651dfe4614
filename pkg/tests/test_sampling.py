import itertools
import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hhexp import DesignConfig, FinitePopulation, SampleData, draw_sample, sample_statistics
from hhexp.errors import DesignInfeasible, EmptySubset, RegimeMismatch
from hhexp.sampling import subsample_size


def _sample(resp, sub, n2, nonresp_x=None, f=1.0):
    resp = np.asarray(resp, dtype=float).reshape(-1, 2)
    sub = np.asarray(sub, dtype=float).reshape(-1, 2)
    nx = None if nonresp_x is None else np.asarray(nonresp_x, dtype=float)
    return SampleData(resp, sub, n2, len(resp) + n2, f, nx)


def test_all_respondents_gives_empty_subsample():
    pop = FinitePopulation.from_arrays(np.arange(10.0) + 1, np.arange(10.0), np.zeros(10))
    s = draw_sample(pop, DesignConfig(4, 2.0, seed=1))
    assert (s.n1, s.n2, s.h2) == (4, 0, 0)
    assert sample_statistics(s).ybar_h2 is None


def test_f_one_interviews_every_nonrespondent(six_unit_pop):
    for seed in range(20):
        s = draw_sample(six_unit_pop, DesignConfig(4, 1.0, seed=seed))
        assert s.h2 == s.n2
        assert sorted(s.sub[:, 0]) == sorted(s.nonresp_x)


def test_subsample_is_subset_of_sampled_nonrespondents(six_unit_pop):
    for seed in range(20):
        s = draw_sample(six_unit_pop, DesignConfig(5, 2.0, seed=seed))
        assert set(s.sub[:, 0]) <= set(s.nonresp_x)
        assert s.n1 + s.n2 == 5


def test_draw_is_deterministic(six_unit_pop):
    cfg = DesignConfig(4, 2.0, seed=123)
    assert draw_sample(six_unit_pop, cfg) == draw_sample(six_unit_pop, cfg)


def test_n_above_population_size(six_unit_pop):
    with pytest.raises(DesignInfeasible):
        draw_sample(six_unit_pop, DesignConfig(7, 1.0))


@pytest.mark.parametrize("n, f", [(1, 1.0), (3, 0.5)])
def test_invalid_design(n, f):
    with pytest.raises(DesignInfeasible):
        DesignConfig(n, f)


@given(st.integers(0, 500), st.floats(1.0, 50.0))
def test_subsample_size_bounds(n2, f):
    h2 = subsample_size(n2, f)
    if n2 == 0:
        assert h2 == 0
    else:
        assert 1 <= h2 <= n2


def test_subsample_rounding_is_half_to_even():
    assert subsample_size(5, 2.0) == 2   # 2.5 -> 2
    assert subsample_size(7, 2.0) == 4   # 3.5 -> 4
    assert subsample_size(1, 2.0) == 1   # 0.5 -> 0, clamped up
    assert subsample_size(3, 1.0) == 3


def test_first_phase_inclusion_frequencies_are_uniform():
    pop = FinitePopulation.from_arrays(np.arange(6.0) + 1, np.arange(6.0) + 1, [0, 0, 0, 0, 1, 1])
    draws = 100_000
    counts = dict.fromkeys(range(1, 7), 0)
    for seed in range(draws):
        s = draw_sample(pop, DesignConfig(3, 2.0, seed=seed))
        for v in np.r_[s.resp[:, 0], s.nonresp_x]:
            counts[int(v)] += 1
    p = 3 / 6
    se = np.sqrt(p * (1 - p) / draws)
    for unit, c in counts.items():
        assert abs(c / draws - p) <= 3 * se, unit


def test_exhaustive_first_phase_inclusion_is_n_over_N():
    N, n = 6, 3
    nr = [0, 0, 0, 0, 1, 1]
    incl = [Fraction(0)] * N
    combos = list(itertools.combinations(range(N), n))
    for c in combos:
        n2 = sum(nr[i] for i in c)
        h2 = subsample_size(n2, 2.0)
        subs = list(itertools.combinations([i for i in c if nr[i]], h2))
        for _ in subs:
            for i in c:
                incl[i] += Fraction(1, len(combos) * len(subs))
    assert all(v == Fraction(n, N) for v in incl)


def test_sample_statistics_direct_means():
    s = _sample([[1, 10], [2, 12]], [[5, 20]], n2=1, nonresp_x=[3])
    st_ = sample_statistics(s)
    assert st_.ybar1 == 11 and st_.ybar_h2 == 20
    assert st_.xbar_full == 2
    assert st_.xbar1 == 1.5 and st_.xbar_h2 == 5


def test_empty_subsets_are_absent_not_zero():
    s = _sample([[1, 10], [2, 12]], [], n2=0, nonresp_x=[])
    st_ = sample_statistics(s)
    assert st_.ybar_h2 is None and st_.xbar_h2 is None
    with pytest.raises(EmptySubset):
        st_.require("ybar_h2")


def test_regime_b_has_no_full_xbar():
    s = _sample([[1, 10]], [[5, 20]], n2=1)
    assert s.regime == "B"
    assert sample_statistics(s).xbar_full is None
    with pytest.raises(RegimeMismatch):
        s.project("A")


def test_sample_json_round_trip(six_unit_pop):
    s = draw_sample(six_unit_pop, DesignConfig(4, 2.0, seed=5))
    for view in (s, s.project("B")):
        d = json.loads(json.dumps(view.to_dict()))
        assert SampleData.from_dict(d) == view
    assert s.project("B").to_dict()["nonresp_x"] is None
