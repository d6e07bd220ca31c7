from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ampqc.errors import CapabilityError, DomainError
from ampqc.qudit import BellLabel, CatLabel
from ampqc.swap import (
    compare_distributions,
    dense_swap_oracle,
    run_swap_check,
    swap_apply,
    swap_distribution,
    swap_sample,
)

from conftest import within_3_sigma


@st.composite
def swap_inputs(draw, max_d=7, max_m=5):
    d = draw(st.integers(2, max_d))
    m = draw(st.integers(1, max_m))
    cat = CatLabel(draw(st.lists(st.integers(0, d - 1), min_size=m + 1, max_size=m + 1)))
    bell = BellLabel(draw(st.integers(0, d - 1)), draw(st.integers(0, d - 1)))
    k = draw(st.integers(1, m))
    v0, v1 = draw(st.integers(0, d - 1)), draw(st.integers(0, d - 1))
    return d, cat, bell, k, v0, v1


class TestSwapApply:
    def test_forced_outcome_d2(self):
        out = swap_apply(2, CatLabel((0, 0, 0)), BellLabel(0, 0), 1, 1, 1)
        assert out.new_cat.marks == (1, 1, 0)
        assert out.phase_exponent == 1

    def test_all_zero_fixed_point(self):
        out = swap_apply(3, CatLabel((0, 0, 0)), BellLabel(0, 0), 2, 0, 0)
        assert out.new_cat.marks == (0, 0, 0)
        assert out.phase_exponent == 0

    def test_d3_arithmetic(self):
        out = swap_apply(3, CatLabel((1, 2, 0)), BellLabel(2, 1), 1, 2, 2)
        assert out.new_cat.marks == (1, 1, 0)

    def test_bell_result(self):
        out = swap_apply(3, CatLabel((0, 0)), BellLabel(0, 0), 1, 2, 1)
        assert out.bell_result == (2, 1)

    @pytest.mark.parametrize("k", [0, 3])
    def test_position_out_of_range(self, k):
        with pytest.raises(DomainError):
            swap_apply(2, CatLabel((0, 0, 0)), BellLabel(0, 0), k, 0, 0)

    @given(swap_inputs())
    def test_mark_conservation(self, case):
        d, cat, bell, k, v0, v1 = case
        new = swap_apply(d, cat, bell, k, v0, v1).new_cat
        assert (new.phase + v0) % d == (cat.phase + bell.u) % d
        assert (new[k] + v1) % d == (cat[k] + bell.v) % d
        assert all(new[j] == cat[j] for j in range(1, cat.m + 1) if j != k)


class TestSwapDistribution:
    def test_d2_all_zero(self):
        dist = swap_distribution(2, CatLabel((0, 0, 0)), BellLabel(0, 0), 1)
        assert len(dist.entries) == 4
        coeffs = {(e.v0, e.v1): e.coefficient for e in dist.entries}
        # phase exponent (0 - v1)(0 - v0) mod 2 is odd only for (1, 1)
        assert coeffs == pytest.approx({(0, 0): 0.5, (0, 1): 0.5, (1, 0): 0.5, (1, 1): -0.5})

    @pytest.mark.parametrize("d", range(2, 6))
    def test_magnitudes(self, d, rng):
        for _ in range(10):
            cat = CatLabel(rng.integers(0, d, size=4))
            dist = swap_distribution(d, cat, BellLabel(*rng.integers(0, d, size=2)), int(rng.integers(1, 4)))
            assert len(dist.entries) == d * d
            assert all(abs(abs(e.coefficient) - 1 / d) < 1e-12 for e in dist.entries)
            assert dist.total_probability() == pytest.approx(1.0)

    def test_matches_oracle_d3(self, rng):
        for _ in range(20):
            cat = CatLabel(rng.integers(0, 3, size=3))
            bell = BellLabel(*rng.integers(0, 3, size=2))
            k = int(rng.integers(1, 3))
            assert compare_distributions(swap_distribution(3, cat, bell, k), dense_swap_oracle(3, cat, bell, k)) == []


class TestOracle:
    def test_exhaustive_d2_m2(self):
        report = run_swap_check(2, 2, exhaustive=True)
        # 2 phase marks x 2 shift marks x 4 Bell labels x 1 position
        assert report["cases"] == 16
        assert report["failures"] == 0

    def test_exhaustive_three_particle_cat(self):
        report = run_swap_check(2, 3, exhaustive=True)
        assert report["cases"] == 2**3 * 4 * 2
        assert report["failures"] == 0

    def test_single_particle_rejected(self):
        with pytest.raises(DomainError):
            run_swap_check(2, 1, exhaustive=True)

    def test_branch_count(self):
        dist = dense_swap_oracle(3, CatLabel((2, 0, 1)), BellLabel(1, 2), 2)
        assert len(dist.entries) == 9

    def test_detects_wrong_table(self):
        cat, bell = CatLabel((0, 1, 0)), BellLabel(1, 1)
        good = swap_distribution(2, cat, bell, 1)
        bad = type(good)(2, tuple(e if (e.v0, e.v1) != (1, 0) else type(e)(1, 0, e.new_cat, -e.coefficient)
                                  for e in good.entries))
        assert compare_distributions(bad, dense_swap_oracle(2, cat, bell, 1))

    def test_cap(self):
        with pytest.raises(CapabilityError):
            run_swap_check(7, 5, exhaustive=True)
        with pytest.raises(CapabilityError):
            dense_swap_oracle(7, CatLabel((0,) * 6), BellLabel(0, 0), 1)

    def test_sampled_needs_rng(self):
        with pytest.raises(DomainError):
            run_swap_check(2, 2, exhaustive=False)


class TestSampling:
    def test_uniform_outcomes(self, rng):
        d, trials = 3, 5000
        cat, bell = CatLabel((1, 2, 0)), BellLabel(2, 1)
        counts = Counter((o.v0, o.v1) for o in (swap_sample(d, cat, bell, 2, rng) for _ in range(trials)))
        assert len(counts) == d * d
        assert all(within_3_sigma(c, trials, 1 / d**2) for c in counts.values())

    @settings(max_examples=50)
    @given(swap_inputs(), st.integers(0, 2**32 - 1))
    def test_sample_is_a_distribution_branch(self, case, seed):
        d, cat, bell, k, _, _ = case
        out = swap_sample(d, cat, bell, k, np.random.default_rng(seed))
        branch = swap_distribution(d, cat, bell, k).by_outcome()[(out.v0, out.v1)]
        assert branch.new_cat == out.new_cat
