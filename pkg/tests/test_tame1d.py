"""Tests for the exact line calculus."""

import doctest
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tametop.ordinal import natural_sum
from tametop.tame1d import tameset
from tametop.tame1d.generators import nested_chain, random_family, random_set
from tametop.tame1d.parser import ExpressionSyntaxError, parse_set
from tametop.tame1d.ranks import (
    HasInterior,
    RankExceeded,
    cb_rank,
    cb_rank_at,
    classify_discrete,
    decompose_discrete,
    dim,
    gap_delta,
)
from tametop.tame1d.rational import NEG_INF, POS_INF
from tametop.tame1d.stratify import stratify_line, verify_stratification
from tametop.tame1d.tameset import (
    EMPTY,
    contains,
    equals,
    intersect,
    is_disjoint,
    is_subset,
    union,
    union_all,
)
from tametop.tame1d.topology import (
    boundary,
    cb_derivative,
    closure,
    constructible_depth,
    decompose_locally_closed,
    frontier,
    interior,
    is_closed,
    isolated_points,
    lc_part,
    nlc_part,
    nlc_part_via_frontiers,
)
from tametop.tame1d.truncation import isolated_within, isolation_disagreements, truncate

HALVES = "chain(0,1,1/2)"
HALVES_CLOSED = "chain(0,1,1/2,point,closed)"
RADIUS = Fraction(1, 2000)

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def s(text: str):
    return parse_set(text)


def points(*values) -> object:
    return union_all([s(f"point({v})") for v in values]) if values else EMPTY


class TestParser:
    def test_interval(self):
        a = s("interval(0,1,oc)")
        assert Fraction(1) in a
        assert Fraction(0) not in a

    def test_infinite_ends(self):
        a = s("interval(-oo,0,oo)")
        assert Fraction(-10**9) in a
        assert dim(a) == 1

    def test_chain_anchors(self):
        a = s(HALVES)
        assert Fraction(1, 8) in a
        assert Fraction(0) not in a
        assert Fraction(3, 8) not in a

    def test_closed_chain_contains_limit(self):
        assert Fraction(0) in s(HALVES_CLOSED)

    def test_divergent_chain(self):
        a = s("chain(0,1,1/2,point,divergent)")
        assert Fraction(1024) in a
        assert not a.is_bounded()

    def test_empty(self):
        assert s("empty").is_empty()

    def test_nested_template(self):
        # the copy at anchor 1 has scale 1/6, so its points are 1 + 2^-j/7
        a = s("chain(0,1,1/2,chain(0,6/7,1/2),closed)")
        assert Fraction(8, 7) in a
        assert Fraction(15, 14) in a
        assert Fraction(1) not in a
        assert Fraction(0) in a

    @pytest.mark.parametrize(
        "text",
        [
            "interval(0,1)",
            "chain(0,1,2)",
            "union(",
            "blob(1)",
            "chain(0,1,1/2,closed,divergent)",
            "chain(0,1,1/2,chain(0,1,1/2),closed)",
        ],
    )
    def test_rejects(self, text):
        with pytest.raises(ExpressionSyntaxError):
            s(text)

    def test_syntax_error_position(self):
        with pytest.raises(ExpressionSyntaxError) as info:
            s("union(point(1), ?)")
        assert info.value.position == 15


class TestBoolean:
    def test_union_identity(self):
        a = s(HALVES_CLOSED)
        assert equals(union(EMPTY, a), a)

    def test_union_absorbs_anchors_in_interval(self):
        a = union(s("interval(0,1,oo)"), s(HALVES))
        assert equals(a, s("interval(0,1,oc)"))

    def test_interleaved_chains(self):
        a = union(s(HALVES), s("chain(0,3,1/2)"))
        assert Fraction(3, 4) in a and Fraction(1, 4) in a
        assert Fraction(0) not in a

    def test_intersect_idempotent(self):
        a = s(HALVES_CLOSED)
        assert equals(intersect(a, a), a)

    def test_intersect_with_interval(self):
        got = intersect(s(HALVES), s("interval(1/4,1,cc)"))
        assert equals(got, points("1", "1/2", "1/4"))

    def test_module_example(self):
        assert doctest.testmod(tameset).failed == 0

    def test_intersect_independent_ratios(self):
        assert equals(intersect(s(HALVES), s("chain(0,1,1/3)")), points("1"))

    def test_subset_and_disjoint(self):
        assert is_subset(s(HALVES), s(HALVES_CLOSED))
        assert is_disjoint(s(HALVES), s("point(0)"))
        assert contains(s(HALVES_CLOSED), Fraction(0))


class TestTopology:
    def test_closure_absorbs_chain(self):
        a = union(s("interval(0,1,oo)"), s(HALVES))
        assert equals(closure(a), s("interval(0,1,cc)"))

    def test_frontier_of_open_chain(self):
        assert equals(frontier(s(HALVES)), points("0"))

    def test_boundary_of_interval(self):
        assert equals(boundary(s("interval(0,1,oo)")), points("0", "1"))

    def test_interior_of_chain_is_empty(self):
        assert interior(s(HALVES)).is_empty()

    def test_derivative(self):
        assert cb_derivative(points("1", "2", "3")).is_empty()
        assert equals(cb_derivative(s(HALVES_CLOSED)), points("0"))
        assert equals(cb_derivative(nested_chain(2)), nested_chain(1))

    def test_isolated_points(self):
        assert equals(isolated_points(s("union(point(0), interval(1,2,oo))")), points("0"))
        assert equals(isolated_points(s(HALVES_CLOSED)), s(HALVES))

    def test_closed_sets_are_locally_closed(self):
        assert nlc_part(s(HALVES_CLOSED)).is_empty()
        assert nlc_part(s("interval(0,1,cc)")).is_empty()

    def test_lc_part_of_locally_closed(self):
        a = s("union(interval(0,1,oc), point(2))")
        assert equals(lc_part(a), a)

    def test_nlc_example(self):
        # copies of an open chain at every 2^-k, plus 0: only 0 is not locally closed
        a = s("chain(0,1,1/2,chain(0,6/7,1/2),closed)")
        assert equals(nlc_part(a), points("0"))
        assert equals(nlc_part_via_frontiers(a), points("0"))
        assert constructible_depth(a) == 2
        pieces = decompose_locally_closed(a)
        assert len(pieces) == 2
        assert equals(pieces[1], points("0"))

    def test_depth_conventions(self):
        assert constructible_depth(s("interval(0,1,cc)")) == 1
        assert constructible_depth(EMPTY) == 0
        assert decompose_locally_closed(EMPTY) == []

    def test_dim(self):
        assert dim(EMPTY) == NEG_INF
        assert dim(s(HALVES)) == 0
        assert dim(s("union(interval(0,1,oo), point(5))")) == 1


class TestRanks:
    def test_empty_rank(self):
        assert cb_rank(EMPTY) == 0

    def test_closed_chain(self):
        assert cb_rank(s(HALVES_CLOSED)) == 2

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
    def test_nested_chain(self, n):
        assert cb_rank(nested_chain(n)) == n + 1

    def test_nested_chain_expression(self):
        assert cb_rank(s("nested_chain(3)")) == 4

    def test_rank_refuses_interior(self):
        with pytest.raises(HasInterior):
            cb_rank(s("interval(0,1,oo)"))

    def test_pointwise_rank(self):
        a = s(HALVES_CLOSED)
        assert cb_rank_at(a, Fraction(0)) == 2
        assert cb_rank_at(a, Fraction(1, 2)) == 1
        assert cb_rank_at(a, Fraction(3)) == 0

    def test_decompose_discrete(self):
        layers = decompose_discrete(s(HALVES_CLOSED), 2)
        assert equals(layers[0], s(HALVES))
        assert equals(layers[1], points("0"))

    def test_decompose_discrete_pads(self):
        layers = decompose_discrete(points("1", "2"), 3)
        assert len(layers) == 3
        assert layers[1].is_empty() and layers[2].is_empty()

    def test_decompose_discrete_rank_exceeded(self):
        with pytest.raises(RankExceeded):
            decompose_discrete(nested_chain(2), 2)

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_nested_layers_are_discrete_and_disjoint(self, n):
        layers = decompose_discrete(nested_chain(n), n + 1)
        assert equals(union_all(layers), nested_chain(n))
        for i, layer in enumerate(layers):
            assert cb_rank(layer) <= 1
            assert all(is_disjoint(layer, other) for other in layers[i + 1 :])

    def test_gap_delta(self):
        assert gap_delta(points("0", "1", "3")) == 1
        assert gap_delta(s(HALVES_CLOSED)) == 0
        assert gap_delta(s("chain(0,1,1/2,point,divergent)")) == 1
        assert gap_delta(points("7")) == POS_INF

    def test_classify(self):
        assert classify_discrete(points("0", "1")) == "pseudo-finite"
        assert classify_discrete(s("chain(0,1,1/2,point,divergent)")) == "pseudo-N"
        assert classify_discrete(s(HALVES)) == "discrete"
        assert classify_discrete(s(HALVES_CLOSED)) == "not-discrete"


class TestTruncation:
    def test_closed_chain(self):
        got = truncate(s(HALVES_CLOSED), 1, 3)
        assert got.points == (Fraction(0), Fraction(1, 4), Fraction(1, 2), Fraction(1))

    def test_empty(self):
        assert truncate(EMPTY, 2, 2).points == ()

    def test_nested(self):
        # 2 anchors, each with 2 sub-anchors and the sub-limit, plus the limit
        assert len(truncate(nested_chain(2), 2, 2).points) == 7

    def test_isolation_oracle(self):
        # near 2^-k the copy has points 2^-k(1 + 2^-j/7); only the anchors 2^-k accumulate
        a = nested_chain(2)
        window = (Fraction(1, 4), Fraction(1))
        coarse = [p for p in truncate(a, 2, 3).points if window[0] <= p <= window[1]]
        found = isolated_within(truncate(a, 2, 10).points, lambda _: RADIUS)
        isolated, derived = isolated_points(a), cb_derivative(a)
        assert len(coarse) == 12
        for point in coarse:
            assert (point in isolated) == (point in found), point
            assert (point in derived) == (point not in found), point
        assert isolation_disagreements(a, isolated, window, RADIUS) == []

    def test_isolation_oracle_catches_wrong_claims(self):
        a = nested_chain(2)
        window = (Fraction(1, 4), Fraction(1))
        assert isolation_disagreements(a, cb_derivative(a), window, RADIUS)

    def test_isolated_points_are_dense(self):
        a = nested_chain(2)
        points_ = truncate(a, 2, 3).points
        isolated = [p for p in points_ if p in isolated_points(a)]
        for anchor in (p for p in points_ if p in cb_derivative(a) and p > 0):
            assert any(abs(anchor - p) <= anchor / 7 for p in isolated), anchor


class TestStratify:
    def test_open_interval(self):
        strat = stratify_line([s("interval(0,1,oo)")])
        assert len(strat.strata) == 5
        assert [stratum.dim for stratum in strat.strata] == [0, 0, 1, 1, 1]
        assert strat.frontier_condition

    def test_closed_chain(self):
        strat = stratify_line([s(HALVES_CLOSED)])
        zero = [stratum.points for stratum in strat.strata if stratum.dim == 0]
        assert any(equals(piece, s(HALVES)) for piece in zero)
        assert any(equals(piece, points("0")) for piece in zero)

    def test_spec_example_passes(self):
        strat = stratify_line([s(f"union(interval(0,1,oo), {HALVES_CLOSED})")])
        assert all(result.passed for result in strat.report)
        names = [result.name for result in strat.report]
        assert names == ["disjoint", "cover", "manifold", "compatible", "frontier_condition"]

    def test_verifier_is_independent(self):
        family = [s("interval(0,1,oo)")]
        strat = stratify_line(family)
        assert all(r.passed for r in verify_stratification(strat, family))


class TestProperties:
    @settings(max_examples=40)
    @given(seeds)
    def test_nlc_identity(self, seed):
        a = random_set(np.random.default_rng(seed))
        assert equals(nlc_part(a), nlc_part_via_frontiers(a))

    @settings(max_examples=40)
    @given(seeds)
    def test_closure_and_interior(self, seed):
        a = random_set(np.random.default_rng(seed))
        assert equals(closure(closure(a)), closure(a))
        assert equals(interior(interior(a)), interior(a))
        assert is_subset(interior(a), a) and is_subset(a, closure(a))
        assert frontier(closure(a)).is_empty()
        assert dim(closure(a)) == dim(a)

    @settings(max_examples=40)
    @given(seeds)
    def test_cb_union_bound(self, seed):
        rng = np.random.default_rng(seed)
        a = random_set(rng, allow_intervals=False)
        b = random_set(rng, allow_intervals=False)
        assert cb_rank(union(a, b)) <= natural_sum(cb_rank(a), cb_rank(b))

    @settings(max_examples=30)
    @given(seeds)
    def test_locally_closed_decomposition(self, seed):
        a = random_set(np.random.default_rng(seed))
        pieces = decompose_locally_closed(a)
        assert len(pieces) == constructible_depth(a)
        assert all(nlc_part(piece).is_empty() for piece in pieces)
        assert equals(union_all(pieces), a)

    @settings(max_examples=30)
    @given(seeds)
    def test_closed_discrete_sets_have_isolated_points(self, seed):
        a = closure(random_set(np.random.default_rng(seed), allow_intervals=False))
        if not a.is_empty():
            assert is_closed(a)
            assert not isolated_points(a).is_empty()

    @settings(max_examples=15)
    @given(seeds)
    def test_random_families_stratify(self, seed):
        family = random_family(np.random.default_rng(seed))
        strat = stratify_line(family)
        assert strat.frontier_condition
        assert strat.rounds <= 32
