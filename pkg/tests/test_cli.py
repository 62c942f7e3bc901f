"""Tests for the command line entry point."""

import json
import os

import pytest

from tametop.cli.cli_starter import EXIT_ERROR, EXIT_OK, EXIT_VERIFICATION, main
from tametop.cli.config_parser import parse_run_config
from tametop.exceptions import ConfigError
from tametop.utils import SEED_ENV_VAR, resolve_seed

QUICK = ["--scales", "3", "--samples", "16"]


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestTame1D:
    def test_rank(self, capsys):
        code, out, _ = run(capsys, "tame1d", "rank", "nested_chain(3)")
        assert code == EXIT_OK
        assert out.strip() == "cb_rank: 4"

    def test_depth(self, capsys):
        code, out, _ = run(capsys, "tame1d", "depth", "chain(0,1,1/2,chain(0,6/7,1/2),closed)")
        assert code == EXIT_OK
        assert out.strip() == "depth: 2"

    def test_dim_of_empty(self, capsys):
        _, out, _ = run(capsys, "tame1d", "dim", "empty")
        assert out.strip() == "dim: -oo"

    def test_json(self, capsys):
        code, out, _ = run(capsys, "tame1d", "closure", "chain(0,1,1/2)", "--json")
        assert code == EXIT_OK
        payload = json.loads(out)
        assert set(payload["closure"]) == {"intervals", "zerodim"}

    def test_stratify(self, capsys):
        code, out, _ = run(
            capsys, "tame1d", "stratify", "union(interval(0,1,oo), chain(0,1,1/2,point,closed))"
        )
        assert code == EXIT_OK
        assert "CHECK frontier_condition PASS" in out
        assert out.strip().splitlines()[-1] == "frontier_condition: PASS"

    def test_rank_with_interior_is_an_error(self, capsys):
        code, _, err = run(capsys, "tame1d", "rank", "interval(0,1,oo)")
        assert code == EXIT_ERROR
        assert "error:" in err

    def test_syntax_error(self, capsys):
        code, _, err = run(capsys, "tame1d", "rank", "union(point(1), ?)")
        assert code == EXIT_ERROR
        assert "error:" in err


class TestOrdinal:
    @pytest.mark.parametrize(
        "argv, expected",
        [
            (["natural-sum", "w + 1", "w^2"], "w^2 + w + 1"),
            (["add", "1", "w"], "w"),
            (["mul", "w + 1", "3"], "w*3 + 1"),
            (["cmp", "w^2", "w*100 + 7"], "greater"),
            (["normalize", "w^2*3 + 1"], "w^2*3 + 1"),
        ],
    )
    def test_actions(self, capsys, argv, expected):
        code, out, _ = run(capsys, "ordinal", *argv)
        assert code == EXIT_OK
        assert out.strip() == expected

    def test_wrong_arity(self, capsys):
        code, _, _ = run(capsys, "ordinal", "add", "w")
        assert code == EXIT_ERROR


class TestComplex:
    def test_rkp(self, capsys, configs_dir):
        path = os.path.join(configs_dir, "complexes", "chain3.json")
        code, out, _ = run(capsys, "complex", "rkp", path)
        assert code == EXIT_OK
        assert out.strip() == "rkP = 3"

    def test_rkp_oracle(self, capsys, configs_dir):
        path = os.path.join(configs_dir, "complexes", "random7.json")
        _, out, _ = run(capsys, "complex", "rkp", path, "--oracle")
        assert out.strip() == "rkP = 2"

    def test_inequalities(self, capsys, configs_dir):
        path = os.path.join(configs_dir, "complexes", "random7.json")
        code, out, _ = run(capsys, "--seed", "1", "complex", "inequalities", path)
        assert code == EXIT_OK
        assert "CHECK rkp_oracle PASS" in out

    def test_missing_file(self, capsys, tmp_path):
        code, _, err = run(capsys, "complex", "rkp", str(tmp_path / "missing.json"))
        assert code == EXIT_ERROR
        assert "error:" in err

    def test_invalid_relation(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(
            json.dumps(
                {
                    "cells": [{"id": "a", "dim": 0}, {"id": "b", "dim": 1}, {"id": "c", "dim": 2}],
                    "frontier": [["a", "b"], ["b", "c"]],
                }
            ),
            encoding="utf-8",
        )
        code, _, err = run(capsys, "complex", "validate", str(path))
        assert code == EXIT_ERROR
        assert "transitivity" in err


class TestWhitney:
    def test_expected_verdict(self, capsys):
        code, out, _ = run(
            capsys, "whitney", "--pair", "stacked-lines", "--cond", "b", "--expect", "FAILS", *QUICK
        )
        assert code == EXIT_OK
        assert "verdict: FAILS" in out
        assert "scale,quantity_max,samples" in out

    def test_expect_mismatch(self, capsys):
        code, _, _ = run(
            capsys, "whitney", "--pair", "stacked-lines", "--cond", "b", "--expect", "HOLDS", *QUICK
        )
        assert code == EXIT_VERIFICATION

    def test_pair_file_and_csv_out(self, capsys, configs_dir, tmp_path):
        target = tmp_path / "sweep.csv"
        pair = os.path.join(configs_dir, "pairs", "half-plane.json")
        code, out, _ = run(
            capsys, "whitney", "--pair", pair, "--cond", "a", "--csv-out", str(target), *QUICK
        )
        assert code == EXIT_OK
        assert "scale,quantity_max" not in out
        rows = target.read_text(encoding="utf-8").splitlines()
        assert rows[0] == "scale,quantity_max,samples"
        assert len(rows) == 4

    def test_unknown_pair(self, capsys, tmp_path):
        code, _, _ = run(capsys, "whitney", "--pair", str(tmp_path / "nope.json"), "--cond", "a")
        assert code == EXIT_ERROR


class TestSelftest:
    def test_ordinal_group(self, capsys, configs_dir):
        code, out, _ = run(capsys, "selftest", "--filter", "ordinal", "--configs-dir", configs_dir)
        assert code == EXIT_OK
        assert all(line.startswith("CHECK ") for line in out.splitlines()[:-1])
        assert out.splitlines()[-1].startswith("selftest:")


class TestConfig:
    def test_defaults_without_file(self):
        config = parse_run_config(None)
        assert config.seed is None
        assert config.tame1d.fixpoint_cap == 32
        assert config.whitney.settings().sheet_cap_factor == 4.0

    def test_bundled_default(self, configs_dir):
        config = parse_run_config(os.path.join(configs_dir, "default.yml"))
        assert config.whitney.settings().samples == 64

    @pytest.mark.parametrize(
        "text", ["seed: [1", "- 1\n- 2\n", "colors: true\n", "whitney:\n  speed: 3\n"]
    )
    def test_rejects(self, tmp_path, text):
        path = tmp_path / "run.yml"
        path.write_text(text, encoding="utf-8")
        with pytest.raises(ConfigError):
            parse_run_config(str(path))

    def test_bad_config_exit_code(self, capsys, tmp_path):
        path = tmp_path / "run.yml"
        path.write_text("seed: many\n", encoding="utf-8")
        code, _, _ = run(capsys, "--config", str(path), "ordinal", "normalize", "w")
        assert code == EXIT_ERROR


class TestSeed:
    def test_precedence(self, monkeypatch):
        monkeypatch.setenv(SEED_ENV_VAR, "7")
        assert resolve_seed(3, 5) == 3
        assert resolve_seed(None, 5) == 7
        monkeypatch.delenv(SEED_ENV_VAR)
        assert resolve_seed(None, 5) == 5
        assert resolve_seed(None, None) == 1

    def test_bad_env(self, monkeypatch):
        monkeypatch.setenv(SEED_ENV_VAR, "lots")
        with pytest.raises(ValueError):
            resolve_seed()
