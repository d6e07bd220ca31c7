"""
Voting, ranking and surveys
===========================
"""
from ampqc.apps import AppConfig, anonymous_rank, anonymous_survey, anonymous_vote

cfg = AppConfig(seed=11)

print("one vote each, candidates 1..3:", anonymous_vote([1, 3, 3, 2, 3], 3, config=cfg))
print("several votes each:", anonymous_vote([[1, 1], [2], [2, 3]], 3, "multi-vote", config=cfg))

ranking = anonymous_rank([5, 2, 5, 9], cfg)
print("ranking:", ranking.values, "multiplicities:", ranking.multiplicities)
print("ranking of lists:", anonymous_rank([[1, 3], [2]], cfg).values)

print("survey total:", anonymous_survey([2, 0, 5], cfg))
