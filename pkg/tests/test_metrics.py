import math

import numpy as np
import pytest

from segcarve import (
    RankingData,
    global_rank,
    mae_first_segment,
    parse_rankings,
    plackett_luce_fit,
    rank_metric_regression,
    rmse_depth,
)
from segcarve.errors import (
    DimsMismatch,
    EmptyData,
    ItemNeverRanked,
    LengthMismatch,
    TooFewPoints,
)

from oracles import pl_grid_search_3, sample_ranking


class TestFrameMetrics:
    def test_mae_identical_is_zero(self):
        seg = np.array([[1, 2], [65535, 0]], dtype=np.uint16)
        assert mae_first_segment(seg, seg) == 0.0

    def test_mae_counts_differing_fraction(self):
        a = np.array([[1, 2], [3, 4]], dtype=np.uint16)
        b = np.array([[1, 2], [3, 5]], dtype=np.uint16)
        assert mae_first_segment(a, b) == 0.25

    def test_mae_miss_sentinel_is_ordinary_value(self):
        a = np.array([[65535]], dtype=np.uint16)
        b = np.array([[1]], dtype=np.uint16)
        assert mae_first_segment(a, b) == 1.0

    def test_mae_shape_mismatch(self):
        with pytest.raises(DimsMismatch):
            mae_first_segment(np.zeros((2, 2)), np.zeros((2, 3)))

    def test_mae_symmetry_and_bounds(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            a = rng.integers(0, 4, (8, 8)).astype(np.uint16)
            b = rng.integers(0, 4, (8, 8)).astype(np.uint16)
            m = mae_first_segment(a, b)
            assert m == mae_first_segment(b, a)
            assert 0.0 <= m <= 1.0

    def test_mae_triangle_inequality(self):
        rng = np.random.default_rng(1)
        for _ in range(20):
            a, b, c = (rng.integers(0, 3, (6, 6)).astype(np.uint16) for _ in range(3))
            assert mae_first_segment(a, c) <= (
                mae_first_segment(a, b) + mae_first_segment(b, c) + 1e-12
            )

    def test_rmse_example(self):
        a = np.array([0.0, 0.0, 0.0, 0.0])
        b = np.array([0.1, 0.1, 0.1, 0.1])
        assert rmse_depth(a, b) == pytest.approx(0.1)

    def test_rmse_symmetry_and_triangle(self):
        rng = np.random.default_rng(2)
        for _ in range(20):
            a, b, c = (rng.random((5, 5)) for _ in range(3))
            assert rmse_depth(a, b) == pytest.approx(rmse_depth(b, a))
            assert rmse_depth(a, c) <= rmse_depth(a, b) + rmse_depth(b, c) + 1e-12

    def test_rmse_shape_mismatch(self):
        with pytest.raises(DimsMismatch):
            rmse_depth(np.zeros(3), np.zeros(4))


class TestPlackettLuce:
    def test_empty_data(self):
        with pytest.raises(EmptyData):
            plackett_luce_fit(RankingData(items=("a", "b"), rankings=()))

    def test_item_never_ranked(self):
        data = RankingData(items=("a", "b", "c"), rankings=(("a", "b"),))
        with pytest.raises(ItemNeverRanked):
            plackett_luce_fit(data)

    def test_symmetric_rankings_give_uniform_worths(self):
        import itertools

        perms = tuple(itertools.permutations(("a", "b", "c")))
        fit = plackett_luce_fit(RankingData(items=("a", "b", "c"), rankings=perms))
        for w in fit.worths:
            assert w == pytest.approx(1.0 / 3.0, abs=1e-6)

    def test_dominant_item_gets_largest_worth(self):
        rankings = (("a", "b", "c"),) * 10 + (("a", "c", "b"),) * 10
        fit = plackett_luce_fit(RankingData(items=("a", "b", "c"), rankings=rankings))
        assert fit.worth("a") > fit.worth("b")
        assert fit.worth("a") > fit.worth("c")

    def test_worths_positive_and_normalized(self):
        rng = np.random.default_rng(3)
        items = ("a", "b", "c", "d")
        rankings = tuple(
            sample_ranking(rng, items, (0.4, 0.3, 0.2, 0.1)) for _ in range(50)
        )
        fit = plackett_luce_fit(RankingData(items=items, rankings=rankings))
        assert all(w > 0 for w in fit.worths)
        assert sum(fit.worths) == pytest.approx(1.0, abs=1e-12)

    def test_matches_grid_search_oracle(self):
        rng = np.random.default_rng(4)
        items = ("a", "b", "c")
        true_w = (0.5, 0.3, 0.2)
        rankings = tuple(sample_ranking(rng, items, true_w) for _ in range(40))
        fit = plackett_luce_fit(RankingData(items=items, rankings=rankings))
        best = pl_grid_search_3(rankings, items, smoothing=0.01)
        for got, expected in zip(fit.worths, best):
            assert got == pytest.approx(expected, abs=0.01)

    def test_loglik_history_nondecreasing(self):
        rng = np.random.default_rng(5)
        items = ("a", "b", "c", "d")
        rankings = tuple(
            sample_ranking(rng, items, (0.4, 0.3, 0.2, 0.1)) for _ in range(30)
        )
        _fit, history = plackett_luce_fit(
            RankingData(items=items, rankings=rankings), return_history=True
        )
        diffs = np.diff(np.asarray(history))
        assert np.all(diffs >= -1e-9)

    def test_partial_rankings_supported(self):
        rankings = (("a", "b"), ("b", "c"), ("a", "c"), ("a", "b", "c"))
        fit = plackett_luce_fit(RankingData(items=("a", "b", "c"), rankings=rankings))
        order = global_rank(fit)
        assert order[0] == "a"


class TestGlobalRank:
    def test_descending_worth(self):
        from segcarve import WorthVector

        wv = WorthVector(items=("x", "y", "z"), worths=(0.2, 0.5, 0.3))
        assert global_rank(wv) == ["y", "z", "x"]

    def test_ties_broken_by_ascending_id(self):
        from segcarve import WorthVector

        wv = WorthVector(items=("b", "a", "c"), worths=(0.25, 0.25, 0.5))
        assert global_rank(wv) == ["c", "a", "b"]

    def test_rescaling_worths_preserves_order(self):
        rng = np.random.default_rng(6)
        items = ("a", "b", "c", "d")
        rankings = tuple(
            sample_ranking(rng, items, (0.4, 0.3, 0.2, 0.1)) for _ in range(40)
        )
        fit = plackett_luce_fit(RankingData(items=items, rankings=rankings))
        from segcarve import WorthVector

        scaled = WorthVector(items=fit.items, worths=tuple(3.7 * w for w in fit.worths))
        assert global_rank(fit) == global_rank(scaled)


class TestRegression:
    def test_exact_line_recovered(self):
        ranks = [1.0, 2.0, 3.0, 4.0]
        values = [0.1 + 0.05 * r for r in ranks]
        slope, intercept, r2 = rank_metric_regression(ranks, values)
        assert slope == pytest.approx(0.05, abs=1e-12)
        assert intercept == pytest.approx(0.1, abs=1e-12)
        assert r2 == pytest.approx(1.0, abs=1e-12)

    def test_matches_polyfit_closed_form(self):
        rng = np.random.default_rng(7)
        for _ in range(10):
            ranks = np.arange(1.0, 9.0)
            values = rng.random(8)
            slope, intercept, r2 = rank_metric_regression(ranks, values)
            expected = np.polyfit(ranks, values, 1)
            assert slope == pytest.approx(expected[0], abs=1e-9)
            assert intercept == pytest.approx(expected[1], abs=1e-9)
            resid = values - (slope * ranks + intercept)
            r2_expected = 1.0 - resid.var() / values.var()
            assert r2 == pytest.approx(r2_expected, abs=1e-9)

    def test_constant_response_r2_zero(self):
        slope, intercept, r2 = rank_metric_regression([1, 2, 3], [0.5, 0.5, 0.5])
        assert slope == 0.0 and intercept == 0.5 and r2 == 0.0

    def test_errors(self):
        with pytest.raises(LengthMismatch):
            rank_metric_regression([1, 2], [1, 2, 3])
        with pytest.raises(TooFewPoints):
            rank_metric_regression([1], [1])
        with pytest.raises(TooFewPoints):
            rank_metric_regression([2, 2, 2], [1, 2, 3])


class TestParseRankings:
    def test_basic(self):
        data = parse_rankings("a,b,c\n# comment\n\nb,a\n")
        assert data.items == ("a", "b", "c")
        assert data.rankings == (("a", "b", "c"), ("b", "a"))

    def test_empty_raises(self):
        with pytest.raises(EmptyData):
            parse_rankings("# nothing here\n")
