from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ampqc.analysis import (
    SuccessProbInput,
    detection_experiment,
    minimal_d_one,
    minimal_d_two,
    mod_sum_identity_check,
    run_experiment,
    success_prob_one,
    success_prob_two,
)
from ampqc.channel import EveModel
from ampqc.errors import DomainError
from ampqc.protocol_one import ProtocolOneConfig, run_protocol_one
from ampqc.protocol_two import ProtocolTwoConfig


def grid(d, cells, rounds, n):
    u = np.array([c[0] for c in cells]).reshape(rounds, n)
    w = np.array([c[1] for c in cells]).reshape(rounds, n)
    return SuccessProbInput(d, u, w)


def brute_product(d, cells):
    out = Fraction(1)
    for u, w in cells:
        out *= Fraction(d - u, d) * Fraction(u + w, d)
    return out


class TestSuccessProbability:
    def test_single_cell(self):
        p = success_prob_one(grid(2, [(1, 0)], 1, 1), xi=0, n=1)
        assert p.value == Fraction(1, 4) and p.in_unit_interval

    def test_two_participants(self):
        assert success_prob_one(grid(3, [(1, 1), (2, 0)], 1, 2), xi=0, n=2).value == Fraction(8, 81)

    def test_protocol_two_single(self):
        assert success_prob_two(grid(2, [(1, 1)], 1, 1), n=1).value == Fraction(1, 2)

    def test_protocol_two_square(self):
        p = success_prob_two(grid(2, [(1, 0)] * 4, 2, 2), n=2)
        assert p.value == Fraction(1, 4) ** 4
        assert abs(float(p) - 0.25**4) <= 1e-12

    def test_zero_cell_absorbs(self, rng):
        cells = [tuple(rng.integers(0, 3, size=2)) for _ in range(5)] + [(0, 0)]
        assert success_prob_two(grid(3, cells[2:], 2, 2), 2).value == 0
        assert success_prob_one(grid(3, cells, 2, 3), xi=1, n=3).value == 0

    def test_shape_mismatch(self):
        with pytest.raises(DomainError):
            success_prob_one(grid(2, [(1, 0)] * 2, 1, 2), xi=1, n=2)
        with pytest.raises(DomainError):
            SuccessProbInput(2, np.zeros((1, 2)), np.zeros((2, 1)))
        with pytest.raises(DomainError):
            SuccessProbInput(2, np.array([[2]]), np.array([[0]]))

    @given(st.integers(2, 9).flatmap(
        lambda d: st.tuples(st.just(d), st.lists(st.tuples(st.integers(0, d - 1), st.integers(0, d - 1)),
                                                 min_size=1, max_size=9))))
    def test_matches_hand_product(self, case):
        d, cells = case
        p = success_prob_one(grid(d, cells, len(cells), 1), xi=len(cells) - 1, n=1)
        assert p.value == brute_product(d, cells)
        assert p.in_unit_interval

    def test_from_transcript(self, rng):
        res = run_protocol_one(ProtocolOneConfig(2, 1, d=3), [[1], [0, 1]], rng=rng)
        inp = SuccessProbInput.from_transcript(res.transcript)
        assert inp.u.shape == (2, 2)
        assert inp.w.tolist() == [[0, 1], [1, 1]]


class TestMinimalDimension:
    def test_lengths(self):
        assert minimal_d_one([3, 1, 2]) == (4, False)

    def test_clamp(self):
        assert minimal_d_two([0]) == (2, True)

    def test_values(self):
        assert minimal_d_two([5, 5]).d == 6

    def test_empty(self):
        with pytest.raises(DomainError):
            minimal_d_one([])


class TestModSum:
    def test_examples(self):
        assert mod_sum_identity_check([3, 4], 5)
        assert mod_sum_identity_check([0, 0, 0], 7)

    @given(st.integers(2, 17), st.lists(st.integers(0, 10**6), max_size=12))
    def test_property(self, d, values):
        assert mod_sum_identity_check(values, d)

    def test_negative(self):
        with pytest.raises(DomainError):
            mod_sum_identity_check([-1], 3)


class TestExperiments:
    def test_protocol_one_strict(self):
        rep = run_experiment("one", ProtocolOneConfig(3, 3, strict_d=True), 100, seed=1)
        assert rep.statistics["correct_exact"].mean == 1.0
        assert rep.statistics["abort_rate"].mean == 0.0
        assert set(rep.count_errors) == {0}

    def test_protocol_one_wraparound_shows_up(self):
        config = ProtocolOneConfig(3, 2, d=2)
        rep = run_experiment("one", config, 10, seed=2, inputs=[[2], [2], [2]])
        assert rep.statistics["correct_exact"].mean == 0.0
        assert rep.statistics["correct_mod_d"].mean == 1.0

    def test_protocol_two(self):
        rep = run_experiment("two", ProtocolTwoConfig(3), 100, seed=3)
        assert rep.statistics["correct_exact"].mean == 1.0
        assert 0 <= rep.formula.mean <= 1

    def test_abort_rate(self):
        rep = run_experiment("one", ProtocolOneConfig(2, 1, decoys=50), 100, seed=4,
                             inputs=[[1], [0]], eve=EveModel.intercept_resend())
        assert rep.statistics["abort_rate"].mean >= 0.99
        assert rep.formula is None

    def test_reproducible(self):
        config = ProtocolTwoConfig(2)
        a = run_experiment("two", config, 20, seed=9).to_dict()
        assert a == run_experiment("two", config, 20, seed=9).to_dict()

    def test_errors(self):
        with pytest.raises(DomainError):
            run_experiment("one", ProtocolOneConfig(2, 1), 0)
        with pytest.raises(DomainError):
            run_experiment("three", ProtocolOneConfig(2, 1), 5)

    def test_detection(self):
        rep = detection_experiment([2, 3, 5], 5000, seed=5)
        for d in (2, 3, 5):
            stat = rep.statistics[f"d={d}"]
            assert abs(stat.mean - rep.expected[f"d={d}"]) <= 3 * np.sqrt(stat.mean * (1 - stat.mean) / 5000) + 1e-12

    def test_detection_fixed_basis_is_halved_only_for_mismatched_basis(self):
        rep = detection_experiment([3], 5000, seed=6, eve=EveModel.parse("fixed-computational"))
        # decoys in the Fourier basis (half of them) are disturbed with probability 1 - 1/d
        assert abs(rep.statistics["d=3"].mean - 0.5 * (1 - 1 / 3)) < 0.03
