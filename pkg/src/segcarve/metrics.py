"""View-similarity metrics and ranking aggregation.

* MAE of the first encountered segment: fraction of pixels whose
  first-hit labels differ between two views from the same camera (the
  miss sentinel is compared like any other value).
* Depth RMSE over normalized [0, 1] depths, misses carrying 1.0.
* Plackett-Luce worth fitting from partial rankings via
  minorization-maximization with epsilon smoothing, plus the induced
  global ranking and an ordinary-least-squares rank-vs-metric trend.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DimsMismatch,
    EmptyData,
    ItemNeverRanked,
    LengthMismatch,
    TooFewPoints,
)


def mae_first_segment(ref, test):
    """Normalized Hamming distance between two first-hit segment buffers."""
    ref = np.asarray(ref)
    test = np.asarray(test)
    if ref.shape != test.shape:
        raise DimsMismatch("segment buffers differ in shape")
    return float(np.mean(ref != test))


def rmse_depth(ref, test):
    ref = np.asarray(ref, dtype=np.float64)
    test = np.asarray(test, dtype=np.float64)
    if ref.shape != test.shape:
        raise DimsMismatch("depth buffers differ in shape")
    return float(np.sqrt(np.mean((ref - test) ** 2)))


@dataclass(frozen=True)
class RankingData:
    """Partial rankings over a set of item ids, each list best first."""
    items: tuple
    rankings: tuple  # tuple of tuples of item ids

    def __post_init__(self):
        item_set = set(self.items)
        if len(item_set) != len(self.items):
            raise ValueError("duplicate item ids")
        for ranking in self.rankings:
            if len(ranking) < 2:
                raise ValueError("rankings need >= 2 entries")
            if len(set(ranking)) != len(ranking):
                raise ValueError("duplicate item in a ranking")
            if not set(ranking) <= item_set:
                raise ValueError("ranking mentions unknown item")


@dataclass(frozen=True)
class WorthVector:
    items: tuple
    worths: tuple  # positive, sums to 1

    def worth(self, item):
        return self.worths[self.items.index(item)]


def _smoothed_loglik(wins, choice_sets, w, smoothing):
    """Plackett-Luce log-likelihood plus the Gamma(1 + eps, eps) smoothing
    term eps * sum(log w_i - w_i)."""
    ll = float(np.dot(wins, np.log(w)))
    for members in choice_sets:
        ll -= math.log(float(w[members].sum()))
    ll += smoothing * float(np.sum(np.log(w) - w))
    return ll


def plackett_luce_fit(data, max_iter=500, tol=1e-9, smoothing=0.01, return_history=False):
    """Maximum-likelihood worths by minorization-maximization.

    ``smoothing`` adds a pseudo-observation weight (a Gamma(1 + eps, eps)
    prior on each worth) so items that always win still converge. The
    smoothed log-likelihood is checked to be nondecreasing on every
    iteration. Returns worths normalized to sum 1.
    """
    if not data.rankings:
        raise EmptyData("no rankings provided")
    n = len(data.items)
    index = {item: i for i, item in enumerate(data.items)}

    ranked_items = {item for ranking in data.rankings for item in ranking}
    never = [item for item in data.items if item not in ranked_items]
    if never:
        raise ItemNeverRanked("items never ranked: %s" % never)

    # Each ranking of length m contributes m - 1 sequential choices:
    # stage j picks ranking[j] out of ranking[j:].
    wins = np.zeros(n, dtype=np.float64)
    choice_sets = []  # index arrays of the remaining candidates per stage
    for ranking in data.rankings:
        ids = [index[item] for item in ranking]
        for j in range(len(ids) - 1):
            wins[ids[j]] += 1.0
            choice_sets.append(np.array(ids[j:], dtype=np.intp))

    w = np.ones(n, dtype=np.float64)
    ll_prev = _smoothed_loglik(wins, choice_sets, w, smoothing)
    history = [ll_prev]
    for _ in range(max_iter):
        denom = np.full(n, smoothing, dtype=np.float64)
        for members in choice_sets:
            denom[members] += 1.0 / float(w[members].sum())
        w_new = (wins + smoothing) / denom
        ll = _smoothed_loglik(wins, choice_sets, w_new, smoothing)
        if ll < ll_prev - 1e-9:
            raise AssertionError(
                "MM iteration decreased the smoothed log-likelihood "
                "(%r -> %r)" % (ll_prev, ll)
            )
        history.append(ll)
        delta = np.max(np.abs(w_new - w) / w)
        w = w_new
        ll_prev = ll
        if delta < tol:
            break
    worths = w / w.sum()
    fit = WorthVector(items=tuple(data.items), worths=tuple(float(x) for x in worths))
    if return_history:
        return fit, tuple(history)
    return fit


def global_rank(worth_vector):
    """Items by strictly descending worth; ties broken by ascending id."""
    pairs = sorted(
        zip(worth_vector.items, worth_vector.worths), key=lambda p: (-p[1], p[0])
    )
    return [item for item, _w in pairs]


def rank_metric_regression(ranks, values):
    """OLS of metric value on rank: returns (slope, intercept, r_squared).

    A zero-variance response (SS_tot == 0) yields r_squared = 0.
    """
    ranks = np.asarray(ranks, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64)
    if ranks.shape != values.shape:
        raise LengthMismatch("ranks and values differ in length")
    if ranks.size < 2:
        raise TooFewPoints("need >= 2 points")
    x_mean = ranks.mean()
    y_mean = values.mean()
    sxx = float(np.sum((ranks - x_mean) ** 2))
    if sxx == 0.0:
        raise TooFewPoints("all ranks identical")
    slope = float(np.sum((ranks - x_mean) * (values - y_mean)) / sxx)
    intercept = float(y_mean - slope * x_mean)
    ss_res = float(np.sum((values - (slope * ranks + intercept)) ** 2))
    ss_tot = float(np.sum((values - y_mean) ** 2))
    r_squared = 0.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return slope, intercept, r_squared


def parse_rankings(text):
    """Line-oriented ranking input: one ranking per line, comma-separated
    item ids, best first. Blank lines and '#' comments are skipped."""
    rankings = []
    items = []
    seen = set()
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        ranking = tuple(tok.strip() for tok in line.split(",") if tok.strip())
        rankings.append(ranking)
        for item in ranking:
            if item not in seen:
                seen.add(item)
                items.append(item)
    if not rankings:
        raise EmptyData("no rankings in input")
    return RankingData(items=tuple(sorted(items)), rankings=tuple(rankings))
