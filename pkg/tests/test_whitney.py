"""Tests for the Whitney condition checks."""

import math
import os
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tametop.exceptions import ConfigError
from tametop.whitney.conditions import (
    CSV_HEADER,
    Condition,
    EmptySample,
    ScalePoint,
    ScaleSweep,
    SweepSettings,
    Verdict,
    VerdictKind,
    check_all,
    check_condition,
    decide,
    margin,
)
from tametop.whitney.expr import ExprSyntaxError, parse_expression
from tametop.whitney.gallery import (
    UnknownGallery,
    clears_margin,
    gallery,
    gallery_names,
    required_margin,
)
from tametop.whitney.loader import InvalidPairSpec, load_pair, parse_chart, parse_pair
from tametop.whitney.manifold import (
    RankDeficient,
    gram_schmidt,
    line_basis,
    subspace_distance,
    tangent_space,
)

E1, E2, E3 = np.eye(3)
QUICK = SweepSettings(scales=3, samples=16)


def quick(name: str):
    return replace(gallery(name), settings=QUICK)


class TestSubspaceDistance:
    def test_line_in_plane(self):
        plane = np.column_stack([E1, E2])
        assert subspace_distance(E1, plane) == pytest.approx(0.0, abs=1e-15)

    def test_orthogonal(self):
        assert subspace_distance(E3, np.column_stack([E1, E2])) == pytest.approx(1.0)

    def test_diagonal(self):
        diagonal = np.array([1.0, 1.0]) / math.sqrt(2)
        assert subspace_distance(diagonal, np.array([1.0, 0.0])) == pytest.approx(
            1 / math.sqrt(2)
        )

    def test_asymmetric(self):
        plane = np.column_stack([E1, E2])
        assert subspace_distance(plane, E1) == pytest.approx(1.0)

    def test_tiny_angles_survive(self):
        angle = 1e-12
        tilted = np.array([math.cos(angle), math.sin(angle)])
        assert subspace_distance(tilted, np.array([1.0, 0.0])) == pytest.approx(angle, rel=1e-6)

    @settings(max_examples=30)
    @given(st.integers(min_value=0, max_value=2**32 - 1))
    def test_rotation_invariant(self, seed):
        rng = np.random.default_rng(seed)
        rotation, _ = np.linalg.qr(rng.normal(size=(4, 4)))
        a = gram_schmidt(rng.normal(size=(4, 2)))
        b = gram_schmidt(rng.normal(size=(4, 3)))
        assert subspace_distance(rotation @ a, rotation @ b) == pytest.approx(
            subspace_distance(a, b), abs=1e-9
        )

    def test_zero_secant(self):
        with pytest.raises(RankDeficient):
            line_basis(np.zeros(2))


class TestTangentSpace:
    def test_parabola(self):
        chart = parse_chart({"params": ["x"], "coords": ["x", "x**2"], "box": [[-2, 2]]})
        basis = tangent_space(chart, [1.0])[:, 0]
        expected = np.array([1.0, 2.0]) / math.sqrt(5)
        assert np.allclose(np.abs(basis), expected)

    def test_helix_sheet(self):
        pair = gallery("spiral")
        chart = pair.x.charts[0]
        basis = tangent_space(chart, [0.5], ("r", 1.0))[:, 0]
        expected = np.array([1.0, math.cos(0.5), -math.sin(0.5)]) / math.sqrt(2)
        assert np.allclose(basis, expected)

    def test_exp_derivative(self):
        chart = parse_chart(
            {"params": ["x"], "coords": ["x", "exp(-t*x)"], "box": [[0, 1]]}, family_name="t"
        )
        jacobian = chart.jacobian([0.5], ("t", 4.0))
        assert jacobian[1, 0] == pytest.approx(-4.0 * math.exp(-2.0))

    def test_rank_deficient(self):
        chart = parse_chart({"params": ["x"], "coords": ["x**2", "x**3"], "box": [[-1, 1]]})
        with pytest.raises(RankDeficient):
            tangent_space(chart, [0.0])


class TestExpressions:
    def test_evaluate(self):
        expr = parse_expression("x**2 + sin(y) - 3/x", ["x", "y"])
        assert expr.evaluate({"x": 2.0, "y": 0.0}) == pytest.approx(2.5)

    @pytest.mark.parametrize("text", ["x +", "z*x", "sqrt(x)", "tan(x)", "x**y"])
    def test_rejects(self, text):
        with pytest.raises(ExprSyntaxError):
            parse_expression(text, ["x", "y"])


class TestDecide:
    @pytest.mark.parametrize(
        "condition, maxima, expected",
        [
            (Condition.A, [0.5, 0.1, 0.01, 0.001], VerdictKind.HOLDS),
            (Condition.B, [0.5, 0.5, 0.5], VerdictKind.FAILS),
            (Condition.A, [0.5, 0.05, 0.5, 0.05], VerdictKind.INCONCLUSIVE),
            (Condition.A, [0.5, 0.001, 0.005, 0.002], VerdictKind.INCONCLUSIVE),
            (Condition.W, [1.0, 2.0, 4.0, 8.0], VerdictKind.FAILS),
            (Condition.W, [1.0, 1.2, 0.9, 1.1], VerdictKind.HOLDS),
            (Condition.W, [0.0, 0.0, 0.0], VerdictKind.HOLDS),
            (Condition.W, [1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 3.5], VerdictKind.INCONCLUSIVE),
        ],
    )
    def test_rules(self, condition, maxima, expected):
        assert decide(condition, maxima, SweepSettings()) is expected

    @staticmethod
    def verdict(condition, kind, maxima):
        sweep = ScaleSweep(condition, tuple(ScalePoint(0.25, m, 16) for m in maxima))
        growth = maxima[-1] / maxima[0] if maxima[0] else 1.0
        return Verdict(condition, kind, sweep, maxima[-1], growth, float(np.median(maxima)))

    def test_margins(self):
        defaults = SweepSettings()
        fails = self.verdict(Condition.B, VerdictKind.FAILS, [0.5, 0.5, 0.5])
        assert margin(fails, defaults) == pytest.approx(5.0)
        holds = self.verdict(Condition.A, VerdictKind.HOLDS, [0.1, 0.01, 0.001])
        assert margin(holds, defaults) == pytest.approx(10.0)
        grows = self.verdict(Condition.W, VerdictKind.FAILS, [1.0, 4.0, 64.0])
        assert margin(grows, defaults) == pytest.approx(16.0)
        flat = self.verdict(Condition.W, VerdictKind.HOLDS, [0.0, 0.0, 0.0])
        assert margin(flat, defaults) == math.inf
        unsure = self.verdict(Condition.A, VerdictKind.INCONCLUSIVE, [0.5, 0.05])
        assert margin(unsure, defaults) == 0.0


class TestGallery:
    @pytest.mark.parametrize("name", ["exp-curves", "stacked-lines", "spiral", "half-plane"])
    def test_expected_verdicts(self, name):
        pair = gallery(name)
        conditions = [Condition(letter) for letter in pair.expected]
        verdicts = check_all(pair, seed=1, conditions=conditions)
        for letter, kind in pair.expected.items():
            assert verdicts[Condition(letter)].kind.value == kind, letter

    @pytest.mark.parametrize("name", ["exp-curves", "stacked-lines", "spiral", "half-plane"])
    def test_verdicts_clear_their_thresholds(self, name):
        pair = gallery(name)
        verdicts = check_all(pair, seed=1, conditions=[Condition(c) for c in pair.expected])
        for letter in pair.expected:
            value = margin(verdicts[Condition(letter)], pair.settings)
            assert clears_margin(name, letter, value), (letter, value)

    def test_margin_floors(self):
        assert required_margin("exp-curves", "w") == 10.0
        assert required_margin("spiral", "a") == 7.0
        assert not clears_margin("spiral", "a", 6.5)

    def test_bundled_files_match(self, configs_dir):
        for name in gallery_names():
            pair = load_pair(os.path.join(configs_dir, "pairs", f"{name}.json"))
            assert pair.expected == gallery(name).expected
            assert pair.base_point == gallery(name).base_point

    def test_unknown(self):
        with pytest.raises(UnknownGallery):
            gallery("moebius")

    def test_deterministic(self):
        first = check_condition(Condition.A, quick("spiral"), seed=5)
        second = check_condition(Condition.A, quick("spiral"), seed=5)
        assert first.sweep == second.sweep

    def test_jobs_do_not_change_results(self):
        serial = check_all(quick("stacked-lines"), seed=3)
        threaded = check_all(quick("stacked-lines"), seed=3, jobs=3)
        assert all(serial[c].sweep == threaded[c].sweep for c in Condition)

    def test_csv(self):
        verdict = check_condition(Condition.B, quick("stacked-lines"), seed=1)
        rows = verdict.sweep.to_csv().splitlines()
        assert rows[0] == CSV_HEADER
        assert len(rows) == QUICK.scales + 1
        assert float(rows[1].split(",")[0]) == QUICK.r0
        assert verdict.line() == "verdict: FAILS"

    def test_half_plane_tilts_vanish(self):
        verdict = check_condition(Condition.A, quick("half-plane"), seed=1)
        assert verdict.sweep.maxima == [0.0] * QUICK.scales

    def test_empty_sample(self):
        data = {
            "name": "far",
            "base_point": [0, 0],
            "x": {"charts": [{"params": ["x"], "coords": ["x", "5"], "box": [[-1, 1]]}]},
            "y": {"charts": [{"params": ["x"], "coords": ["x", "0"], "box": [[-1, 1]]}]},
            "schedule": {"scales": 2, "samples": 8},
        }
        with pytest.raises(EmptySample):
            check_condition(Condition.A, parse_pair(data))


class TestLoader:
    @staticmethod
    def pair_data(**changes) -> dict:
        line = {"charts": [{"params": ["x"], "coords": ["x", "0"], "box": [[-1, 1]]}]}
        data = {"name": "p", "base_point": [0, 0], "x": line, "y": line}
        data.update(changes)
        return data

    def test_defaults(self):
        pair = parse_pair(self.pair_data())
        assert pair.settings == SweepSettings()
        assert pair.x.ambient_dim == 2 and pair.x.intrinsic_dim == 1
        assert pair.settings.sheet_cap_factor == 4.0

    def test_schedule_override(self):
        pair = parse_pair(self.pair_data(schedule={"samples": 10, "tol_hold": 0.5}))
        assert pair.settings.samples == 10
        assert pair.settings.tol_hold == 0.5

    @pytest.mark.parametrize(
        "changes",
        [
            {"y": None},
            {"base_point": [0, 0, 0]},
            {"schedule": {"speed": 3}},
            {"expected": {"z": "HOLDS"}},
            {"expected": {"a": "MAYBE"}},
            {"x": {"charts": [{"params": ["x"], "coords": ["x", "q"], "box": [[-1, 1]]}]}},
            {"x": {"charts": [{"params": ["x"], "coords": ["x", "0"], "box": [[1, -1]]}]}},
            {"x": {"family": {"name": "t", "base": 1}, "charts": []}},
        ],
    )
    def test_schema_errors(self, changes):
        with pytest.raises(InvalidPairSpec):
            parse_pair(self.pair_data(**changes))

    def test_file_errors_carry_path(self, tmp_path):
        path = tmp_path / "pair.json"
        path.write_text('{"name": "p"}', encoding="utf-8")
        with pytest.raises(ConfigError) as info:
            load_pair(str(path))
        assert info.value.path == str(path)
