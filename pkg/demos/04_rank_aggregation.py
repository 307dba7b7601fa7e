"""
Aggregating preference rankings
===============================

Simulates a panel of raters who each order four rendered views from best
to worst, fits Plackett-Luce worths by minorization-maximization, and
regresses an objective image metric against the aggregated rank. The
fitted worths recover the ground-truth preference strengths and the
regression line summarizes how the metric tracks perceived quality.
"""

import numpy as np

from segcarve import (
    RankingData,
    global_rank,
    plackett_luce_fit,
    rank_metric_regression,
)

items = ("view_a", "view_b", "view_c", "view_d")
true_worths = np.array([0.4, 0.3, 0.2, 0.1])

rng = np.random.default_rng(0)


def draw_ranking():
    remaining = list(range(4))
    order = []
    while remaining:
        w = true_worths[remaining]
        pick = rng.choice(len(remaining), p=w / w.sum())
        order.append(items[remaining.pop(pick)])
    return tuple(order)


rankings = tuple(draw_ranking() for _ in range(150))
fit = plackett_luce_fit(RankingData(items=items, rankings=rankings))

print("fitted worths (true 0.4 / 0.3 / 0.2 / 0.1):")
for item, worth in zip(fit.items, fit.worths):
    print("  %s  %.3f" % (item, worth))
print("aggregate ranking:", " > ".join(global_rank(fit)))

# Pretend each view also has an objective error score that grows with its
# aggregated rank, plus noise, and summarize the trend.
ranks = np.arange(1, 5, dtype=float)
metric = 0.05 + 0.06 * ranks + rng.normal(0, 0.005, 4)
slope, intercept, r2 = rank_metric_regression(ranks, metric)
print("metric vs rank: slope %.4f, intercept %.4f, R^2 %.3f" % (slope, intercept, r2))
