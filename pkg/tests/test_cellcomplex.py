"""Tests for Pillay rank on finite complexes."""

import json
import os

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tametop.cellcomplex.complex import (
    Cell,
    InvalidComplex,
    NotClosed,
    NotSubset,
    StratComplex,
    chain_complex,
    closure_in,
    graded_complex,
    interior_in,
    is_closed_in,
    is_locally_closed_in,
    is_nowhere_dense_in,
    is_open_in,
    maximal_cells,
    random_complex,
    validate,
)
from tametop.cellcomplex.loader import complex_to_dict, load_complex, parse_complex
from tametop.cellcomplex.rank import (
    EMPTY_RANK,
    TooLarge,
    check_rank_inequalities,
    pillay_rank,
    pillay_rank_oracle,
)
from tametop.exceptions import ConfigError

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def bundled(configs_dir: str, name: str) -> StratComplex:
    return load_complex(os.path.join(configs_dir, "complexes", name))


class TestValidate:
    def test_chain_is_valid(self):
        assert all(result.passed for result in validate(chain_complex(4)))

    def test_irreflexivity_witness(self):
        complex_ = StratComplex([Cell("a", 0)], [("a", "a")])
        with pytest.raises(InvalidComplex) as info:
            validate(complex_)
        assert info.value.witness == ("a",)

    def test_transitivity_witness(self):
        cells = [Cell("a", 0), Cell("b", 1), Cell("c", 2)]
        complex_ = StratComplex(cells, [("a", "b"), ("b", "c")])
        with pytest.raises(InvalidComplex) as info:
            validate(complex_)
        assert info.value.witness == ("a", "b", "c")

    def test_unknown_cell(self):
        with pytest.raises(InvalidComplex):
            StratComplex([Cell("a", 0)], [("a", "z")])

    def test_duplicate_id(self):
        with pytest.raises(InvalidComplex):
            StratComplex([Cell("a", 0), Cell("a", 1)])


class TestTopology:
    def test_interval_endpoints(self, configs_dir):
        complex_ = bundled(configs_dir, "interval.json")
        everything = complex_.all_cells
        ends = frozenset({"left", "right"})
        assert is_closed_in(complex_, ends, everything)
        assert is_open_in(complex_, {"open"}, everything)
        assert interior_in(complex_, ends, everything) == frozenset()
        assert is_nowhere_dense_in(complex_, ends, everything)
        assert maximal_cells(complex_, everything) == frozenset({"open"})

    def test_closure_in_subspace(self):
        complex_ = chain_complex(3)
        assert closure_in(complex_, frozenset({"c2"}), frozenset({"c1", "c2"})) == {"c1", "c2"}

    def test_locally_closed(self):
        complex_ = chain_complex(4)
        everything = complex_.all_cells
        assert is_locally_closed_in(complex_, {"c1", "c2"}, everything)
        assert not is_locally_closed_in(complex_, {"c0", "c2"}, everything)

    def test_not_subset(self):
        complex_ = chain_complex(3)
        with pytest.raises(NotSubset):
            interior_in(complex_, {"c2"}, {"c0", "c1"})
        with pytest.raises(NotSubset):
            is_closed_in(complex_, {"zz"}, complex_.all_cells)

    def test_nowhere_dense_needs_closed(self):
        complex_ = chain_complex(3)
        with pytest.raises(NotClosed):
            is_nowhere_dense_in(complex_, {"c2"}, complex_.all_cells)


class TestRank:
    @pytest.mark.parametrize("length", [1, 2, 3, 4, 6])
    def test_chain(self, length):
        assert pillay_rank(chain_complex(length)) == length - 1

    def test_empty_union(self):
        assert pillay_rank(chain_complex(3), []) == EMPTY_RANK
        assert pillay_rank_oracle(chain_complex(3), []) == EMPTY_RANK

    def test_antichain(self):
        complex_ = StratComplex([Cell("a", 0), Cell("b", 0), Cell("c", 2)])
        assert pillay_rank(complex_) == 0

    @pytest.mark.parametrize(
        "name, expected", [("chain3.json", 3), ("interval.json", 1), ("random7.json", 2)]
    )
    def test_bundled(self, configs_dir, name, expected):
        complex_ = bundled(configs_dir, name)
        assert pillay_rank(complex_) == expected
        assert pillay_rank_oracle(complex_) == expected

    def test_subset(self, configs_dir):
        complex_ = bundled(configs_dir, "random7.json")
        assert pillay_rank(complex_, {"p", "e1", "q"}) == 1
        assert pillay_rank(complex_, {"p", "q", "r"}) == 0

    def test_oracle_limit(self):
        with pytest.raises(TooLarge):
            pillay_rank_oracle(chain_complex(21))

    @settings(max_examples=40)
    @given(seeds)
    def test_matches_oracle(self, seed):
        complex_ = random_complex(np.random.default_rng(seed), max_cells=5)
        assert pillay_rank(complex_) == pillay_rank_oracle(complex_)

    @settings(max_examples=25)
    @given(seeds)
    def test_inequalities_hold(self, seed):
        rng = np.random.default_rng(seed)
        complex_ = random_complex(rng, max_cells=6)
        results = check_rank_inequalities(complex_, rng, samples=10)
        assert all(result.passed for result in results), [r.line() for r in results]

    @settings(max_examples=25)
    @given(seeds)
    def test_graded_rank_is_dimension(self, seed):
        rng = np.random.default_rng(seed)
        complex_ = graded_complex(rng)
        assert complex_.is_graded()
        top = max(complex_.dim(cid) for cid in complex_.cells)
        assert pillay_rank(complex_) == top
        names = [result.name for result in check_rank_inequalities(complex_, rng, samples=5)]
        assert "rkp_lomin" in names


class TestLoader:
    def test_parse(self):
        complex_ = parse_complex(
            {"cells": [{"id": "a", "dim": 0}, {"id": "b", "dim": 1}], "frontier": [["a", "b"]]}
        )
        assert complex_.less("a", "b")
        assert complex_to_dict(complex_)["frontier"] == [["a", "b"]]

    @pytest.mark.parametrize(
        "data",
        [
            {"cells": 3},
            [],
            {"cells": [{"dim": 0}]},
            {"cells": [{"id": "a", "dim": "zero"}]},
            {"cells": [{"id": "a", "dim": 0}], "frontier": [["a"]]},
            {"cells": [{"id": "a", "dim": 0}], "frontier": [["a", "b"]]},
        ],
    )
    def test_schema_errors(self, data):
        with pytest.raises(ConfigError):
            parse_complex(data)

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json", encoding="utf-8")
        with pytest.raises(ConfigError) as info:
            load_complex(str(path))
        assert info.value.path == str(path)

    def test_ignores_extra_keys(self, tmp_path):
        path = tmp_path / "c.json"
        path.write_text(
            json.dumps({"cells": [{"id": "a", "dim": 0}], "expected_rank": 0}), encoding="utf-8"
        )
        assert pillay_rank(load_complex(str(path))) == 0
