import dataclasses
from collections import Counter

import pytest

from ampqc.apps import AppConfig, RankingResult, anonymous_rank, anonymous_survey, anonymous_vote
from ampqc.channel import EveModel
from ampqc.errors import DomainError, ProtocolAborted


class TestVote:
    def test_one_vote(self, rng):
        assert anonymous_vote([1, 1, 2], 2, rng=rng) == (2, 1)

    def test_multi_vote(self, rng):
        assert anonymous_vote([[1, 1], [2]], 2, "multi-vote", rng=rng) == (2, 1)

    def test_empty_ballots(self, rng):
        assert anonymous_vote([[], []], 3, "multi-vote", rng=rng) == (0, 0, 0)
        assert anonymous_vote([], 2, rng=rng) == (0, 0)

    def test_single_candidate(self, rng):
        assert anonymous_vote([1, 1, 1], 1, rng=rng) == (3,)

    @pytest.mark.parametrize("ballots,mode", [([0, 1], "one-vote"), ([4], "one-vote"), ([[1, 4]], "multi-vote"),
                                              ([[1]], "one-vote"), ([1], "multi-vote")])
    def test_invalid_ballots(self, rng, ballots, mode):
        with pytest.raises(DomainError):
            anonymous_vote(ballots, 3, mode, rng=rng)

    def test_bad_mode(self, rng):
        with pytest.raises(DomainError):
            anonymous_vote([1], 2, "approval", rng=rng)

    def test_large_electorate_falls_back(self, rng):
        ballots = [1, 2, 2, 3, 1, 2, 3, 3, 3]
        assert anonymous_vote(ballots, 3, rng=rng) == (2, 3, 4)

    def test_random_instances(self, rng):
        for _ in range(100):
            m = int(rng.integers(1, 5))
            if rng.random() < 0.5:
                ballots = [int(b) for b in rng.integers(1, m + 1, size=int(rng.integers(1, 5)))]
                tally = anonymous_vote(ballots, m, rng=rng)
                truth = Counter(ballots)
            else:
                ballots = [[int(c) for c in rng.integers(1, m + 1, size=int(rng.integers(0, 3)))]
                           for _ in range(int(rng.integers(1, 4)))]
                tally = anonymous_vote(ballots, m, "multi-vote", rng=rng)
                truth = Counter(c for b in ballots for c in b)
            assert tally == tuple(truth[c] for c in range(1, m + 1))

    def test_eavesdropper(self, rng):
        config = AppConfig(decoys=50, eve=EveModel.intercept_resend())
        with pytest.raises(ProtocolAborted):
            anonymous_vote([1, 2], 2, config=config, rng=rng)


class TestRank:
    def test_single_values(self, rng):
        assert anonymous_rank([5, 2, 5], rng=rng).values == (2, 5, 5)

    def test_all_equal(self, rng):
        res = anonymous_rank([4, 4, 4, 4], rng=rng)
        assert res.values == (4,) * 4 and res.multiplicities == ((4, 4),)

    def test_lists(self, rng):
        assert anonymous_rank([[1, 3], [2]], rng=rng).values == (1, 2, 3)

    def test_too_few(self, rng):
        with pytest.raises(DomainError):
            anonymous_rank([3], rng=rng)

    def test_output_has_no_owner_field(self, rng):
        res = anonymous_rank([3, 1], rng=rng)
        assert [f.name for f in dataclasses.fields(RankingResult)] == ["values", "multiplicities"]
        assert res.multiplicities == ((1, 1), (3, 1))

    def test_random_instances(self, rng):
        for _ in range(100):
            n = int(rng.integers(2, 5))
            if rng.random() < 0.5:
                xs = [int(x) for x in rng.integers(0, 8, size=n)]
                flat = xs
            else:
                xs = [[int(x) for x in rng.integers(0, 6, size=int(rng.integers(0, 4)))] for _ in range(n)]
                flat = [x for s in xs for x in s]
            assert anonymous_rank(xs, rng=rng).values == tuple(sorted(flat))


class TestSurvey:
    def test_example(self, rng):
        assert anonymous_survey([2, 0, 5], rng=rng) == 7

    def test_zeros(self, rng):
        assert anonymous_survey([0, 0], rng=rng) == 0

    def test_single_respondent(self, rng):
        assert anonymous_survey([7], rng=rng) == 7

    def test_lists(self, rng):
        assert anonymous_survey([[1, 2], [4]], rng=rng) == 7

    def test_value_too_large(self, rng):
        with pytest.raises(DomainError, match="raise d"):
            anonymous_survey([3, 9], AppConfig(d=5), rng=rng)

    def test_negative(self, rng):
        with pytest.raises(DomainError):
            anonymous_survey([1, -2], rng=rng)
        with pytest.raises(DomainError):
            anonymous_survey([], rng=rng)

    def test_seeded_config(self):
        assert anonymous_survey([3, 4, 1], AppConfig(seed=3)) == 8

    def test_random_instances(self, rng):
        for _ in range(100):
            n = int(rng.integers(1, 6))
            xs = [int(x) for x in rng.integers(0, 10, size=n)]
            assert anonymous_survey(xs, rng=rng) == sum(xs)
