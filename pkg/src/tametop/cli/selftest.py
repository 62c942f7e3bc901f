"""Selftest Module.

The acceptance suite behind ``tametop selftest``. Checks are grouped by engine
(``ordinal``, ``tame1d``, ``cellcomplex``, ``whitney``, ``files``); each yields
`CheckResult` lines and every randomized check is driven by one seed.
"""

import glob
import json
import os
from fractions import Fraction
from logging import Logger
from typing import Callable, Iterable, Optional

import numpy as np

from tametop.cellcomplex.complex import chain_complex, graded_complex, random_complex, validate
from tametop.cellcomplex.loader import load_complex
from tametop.cellcomplex.rank import (
    check_rank_inequalities,
    pillay_rank,
    pillay_rank_oracle,
)
from tametop.cli.config_parser import RunConfig
from tametop.exceptions import TameTopError
from tametop.ordinal import Ordinal, Ordering, add, cmp, mul_nat, natural_sum, omega_pow
from tametop.report import CheckResult
from tametop.tame1d.generators import nested_chain, random_family, random_set, seeded
from tametop.tame1d.ranks import cb_rank, decompose_discrete, dim
from tametop.tame1d.stratify import stratify_line
from tametop.tame1d.tameset import difference, equals, is_disjoint, union, union_all
from tametop.tame1d.topology import (
    cb_derivative,
    closure,
    constructible_depth,
    decompose_locally_closed,
    interior,
    isolated_points,
    is_closed,
    nlc_part,
    nlc_part_via_frontiers,
)
from tametop.tame1d.truncation import isolation_disagreements
from tametop.utils import get_logger
from tametop.whitney.conditions import Condition, PairSpec, VerdictKind, check_all, margin
from tametop.whitney.gallery import clears_margin, gallery, gallery_names, required_margin
from tametop.whitney.loader import load_pair
from tametop.whitney.manifold import subspace_distance

LOGGER: Logger = get_logger()

GROUPS: tuple[str, ...] = ("ordinal", "tame1d", "cellcomplex", "whitney", "files")

FD_STEP: float = 1e-6
FD_TOLERANCE: float = 1e-6
DELTA_TOLERANCE: float = 1e-12
JACOBIAN_PROBES: int = 100
ISOLATION_RADIUS: Fraction = Fraction(1, 2000)


def _first_failure(name: str, cases: Iterable[Optional[str]]) -> CheckResult:
    """PASS unless some case returns a witness string."""
    try:
        for witness in cases:
            if witness:
                return CheckResult(name, False, witness)
    except TameTopError as exc:
        return CheckResult(name, False, f"{type(exc).__name__}: {exc}")
    return CheckResult(name, True)


def random_ordinal(rng: np.random.Generator, depth: int = 2) -> Ordinal:
    """A small random ordinal with nested exponents up to ``depth``."""
    terms = []
    for _ in range(int(rng.integers(0, 4))):
        exponent = random_ordinal(rng, depth - 1) if depth > 0 else Ordinal.from_int(0)
        terms.append((exponent, int(rng.integers(1, 4))))
    return Ordinal.from_terms(terms)


class SelfTest:
    """Runs the acceptance checks.

    Attributes:
        config (RunConfig): Sizes and thresholds.
        seed (int): Seed of every randomized check.
        jobs (int): Worker threads for the Whitney sweeps.
        configs_dir (str): Directory holding ``complexes/`` and ``pairs/``.
    """

    def __init__(
        self,
        config: RunConfig,
        seed: int,
        jobs: int = 1,
        configs_dir: str = "configs",
        logger: Optional[Logger] = None,
    ) -> None:
        self.config = config
        self.seed = seed
        self.jobs = jobs
        self.configs_dir = configs_dir
        self.logger: Logger = logger or LOGGER
        self._verdicts: dict = {}

    def rng(self, salt: int) -> np.random.Generator:
        """Independent generator per check."""
        return np.random.default_rng([self.seed, salt])

    # --- ordinal -----------------------------------------------------------------------

    def ordinal_checks(self) -> list[CheckResult]:
        rng = self.rng(1)
        triples = [tuple(random_ordinal(rng) for _ in range(3)) for _ in range(200)]

        def commutative():
            for a, b, _ in triples:
                if natural_sum(a, b) != natural_sum(b, a):
                    yield f"{a} # {b} != {b} # {a}"

        def associative():
            for a, b, c in triples:
                if add(add(a, b), c) != add(a, add(b, c)):
                    yield f"({a} + {b}) + {c} != {a} + ({b} + {c})"
                if natural_sum(natural_sum(a, b), c) != natural_sum(a, natural_sum(b, c)):
                    yield f"natural sum of {a}, {b}, {c} not associative"

        def dominates():
            for a, b, _ in triples:
                if cmp(add(a, b), natural_sum(a, b)) is Ordering.GREATER:
                    yield f"{a} + {b} > {a} # {b}"

        def multiples():
            for a, _, _ in triples:
                r = int(rng.integers(1, 5))
                total = Ordinal.from_int(0)
                for _ in range(r):
                    total = add(total, a)
                if mul_nat(a, r) != total:
                    yield f"{a} * {r} != {total}"

        def syntax():
            for a, b, _ in triples:
                natural_exponents = all(exponent.is_finite() for exponent, _ in a.terms)
                if natural_exponents and Ordinal.parse(str(a)) != a:
                    yield f"parse(str({a!r})) != {a}"
                if add(Ordinal.from_int(1), omega_pow(b)) != omega_pow(b) and not b.is_zero():
                    yield f"1 + w^{b} != w^{b}"

        return [
            _first_failure("ordinal_natural_sum_commutative", commutative()),
            _first_failure("ordinal_associative", associative()),
            _first_failure("ordinal_sum_below_natural_sum", dominates()),
            _first_failure("ordinal_mul_nat", multiples()),
            _first_failure("ordinal_syntax", syntax()),
        ]

    # --- tame1d ------------------------------------------------------------------------

    def tame1d_checks(self) -> list[CheckResult]:
        sizes = self.config.selftest
        corpus_rng = seeded(self.seed)
        corpus = [random_set(corpus_rng) for _ in range(sizes.nlc_sets)]

        def nested():
            for n in range(1, 6):
                a = nested_chain(n)
                if cb_rank(a) != n + 1:
                    yield f"cb_rank(nested_chain({n})) = {cb_rank(a)}"
                layers = decompose_discrete(a, n + 1)
                if len(layers) != n + 1 or not equals(union_all(layers), a):
                    yield f"decompose_discrete(nested_chain({n})) does not cover it"
                for i, layer in enumerate(layers):
                    if int(cb_rank(layer)) > 1:
                        yield f"layer {i} of nested_chain({n}) has rank {cb_rank(layer)}"
                    if any(not is_disjoint(layer, other) for other in layers[i + 1 :]):
                        yield f"layers of nested_chain({n}) overlap"

        def union_bound():
            rng = self.rng(2)
            for _ in range(sizes.union_pairs):
                a = random_set(rng, allow_intervals=False)
                b = random_set(rng, allow_intervals=False)
                joined, bound = cb_rank(union(a, b)), natural_sum(cb_rank(a), cb_rank(b))
                if cmp(joined, bound) is Ordering.GREATER:
                    yield f"A={a} B={b}: {joined} > {bound}"

        def nlc_identity():
            for a in corpus:
                if not equals(nlc_part(a), nlc_part_via_frontiers(a)):
                    yield f"A={a}: {nlc_part(a)} != {nlc_part_via_frontiers(a)}"

        def depth():
            for a in corpus:
                pieces = decompose_locally_closed(a)
                if len(pieces) != constructible_depth(a):
                    yield f"A={a}: {len(pieces)} pieces, depth {constructible_depth(a)}"
                if any(not nlc_part(piece).is_empty() for piece in pieces):
                    yield f"A={a}: a piece is not locally closed"
                if not equals(union_all(pieces), a):
                    yield f"A={a}: pieces do not cover"
                for i, piece in enumerate(pieces):
                    if any(not is_disjoint(piece, other) for other in pieces[i + 1 :]):
                        yield f"A={a}: pieces overlap"

        def invariants():
            for a in corpus:
                if dim(closure(a)) != dim(a):
                    yield f"A={a}: dim(cl A) != dim A"
                if not equals(closure(closure(a)), closure(a)):
                    yield f"A={a}: closure not idempotent"
                if not equals(interior(interior(a)), interior(a)):
                    yield f"A={a}: interior not idempotent"
                if is_closed(a) and not a.is_empty() and not a.has_interior():
                    if isolated_points(a).is_empty():
                        yield f"A={a}: closed, discrete and without isolated points"

        def truncations():
            window = (Fraction(1, 4), Fraction(1))
            a = nested_chain(2)
            claims = {
                "isolated_points": isolated_points(a),
                "A minus cb_derivative": difference(a, cb_derivative(a)),
            }
            for label, claim in claims.items():
                wrong = isolation_disagreements(a, claim, window, ISOLATION_RADIUS)
                if wrong:
                    yield f"{label} of nested_chain(2) disagrees with truncation at {wrong[0]}"

        def stratifications():
            rng = self.rng(3)
            cap = self.config.tame1d.fixpoint_cap
            for _ in range(sizes.stratify_families):
                family = random_family(rng, max_sets=sizes.family_size)
                strat = stratify_line(family, cap)
                if not strat.frontier_condition or strat.rounds > cap:
                    listing = "; ".join(str(a) for a in family)
                    yield f"family [{listing}]: verifier failed after {strat.rounds} rounds"

        return [
            _first_failure("tame1d_nested_chain_rank", nested()),
            _first_failure("tame1d_cb_union_bound", union_bound()),
            _first_failure("tame1d_nlc_identity", nlc_identity()),
            _first_failure("tame1d_constructible_depth", depth()),
            _first_failure("tame1d_invariants", invariants()),
            _first_failure("tame1d_truncation", truncations()),
            _first_failure("tame1d_stratify", stratifications()),
        ]

    # --- cellcomplex -------------------------------------------------------------------

    def cellcomplex_checks(self) -> list[CheckResult]:
        sizes = self.config.selftest
        max_cells = self.config.complex.max_cells
        rng = self.rng(4)
        complexes = [random_complex(rng, max_cells) for _ in range(sizes.random_complexes)]
        graded = [graded_complex(rng, max_cells) for _ in range(sizes.random_complexes)]

        def oracle():
            for complex_ in complexes:
                fast, slow = pillay_rank(complex_), pillay_rank_oracle(complex_)
                if fast != slow:
                    yield f"{sorted(complex_.pairs())}: {fast} != {slow}"

        def chains():
            for k in range(sizes.chain_max + 1):
                if pillay_rank(chain_complex(k + 1)) != k:
                    yield f"chain of length {k}: rank {pillay_rank(chain_complex(k + 1))}"

        def inequalities():
            check_rng = self.rng(5)
            for complex_ in complexes + graded:
                for result in check_rank_inequalities(
                    complex_, check_rng, self.config.complex.samples
                ):
                    if not result.passed:
                        yield f"{result.name}: {result.witness}"

        return [
            _first_failure("cellcomplex_oracle", oracle()),
            _first_failure("cellcomplex_chain_rank", chains()),
            _first_failure("cellcomplex_inequalities", inequalities()),
        ]

    # --- whitney -----------------------------------------------------------------------

    def _pair_verdicts(self, pair: PairSpec) -> dict:
        conditions = [Condition(kind) for kind in pair.expected] or list(Condition)
        if Condition.W in conditions and Condition.A not in conditions:
            conditions.append(Condition.A)
        return check_all(pair, self.seed, self.jobs, conditions)

    def _expected(self, pair: PairSpec, verdicts: dict) -> Iterable[str]:
        for kind, expected in sorted(pair.expected.items()):
            verdict = verdicts[Condition(kind)]
            if verdict.kind.value != expected:
                yield (
                    f"{pair.name} ({kind}): {verdict.kind.value}, expected {expected}, "
                    f"final {verdict.final:.3g}"
                )

    def whitney_checks(self) -> list[CheckResult]:
        settings = self.config.whitney.settings()

        def deltas():
            e1, e2 = np.array([1.0, 0.0]), np.array([0.0, 1.0])
            diagonal = np.array([1.0, 1.0]) / np.sqrt(2.0)
            cases = [(e1, e1, 0.0), (e1, e2, 1.0), (diagonal, e1, np.sqrt(2.0) / 2)]
            for a, b, want in cases:
                got = subspace_distance(a, b)
                if abs(got - want) > DELTA_TOLERANCE:
                    yield f"delta({a}, {b}) = {got!r}, expected {want!r}"

        def jacobians():
            rng = self.rng(6)
            for name in gallery_names():
                pair = gallery(name)
                for manifold in (pair.x, pair.y):
                    for sheet in manifold.sheets(4.0):
                        for chart in manifold.charts:
                            yield from _jacobian_mismatches(chart, sheet, rng, name)

        def verdicts():
            for name in gallery_names():
                pair = _with_settings(gallery(name), settings)
                found = self._pair_verdicts(pair)
                self._verdicts[name] = found
                yield from self._expected(pair, found)
                for kind in sorted(pair.expected):
                    value = margin(found[Condition(kind)], settings)
                    if not clears_margin(name, kind, value):
                        floor = required_margin(name, kind)
                        yield f"{name} ({kind}): margin {value:.3g} below {floor:g}"

        def w_implies_a():
            for name, found in self._verdicts.items():
                w, a = found.get(Condition.W), found.get(Condition.A)
                if w is not None and w.kind is VerdictKind.HOLDS and a.kind is not w.kind:
                    yield f"{name}: w HOLDS but a is {a.kind.value}"

        return [
            _first_failure("whitney_delta", deltas()),
            _first_failure("whitney_jacobian", jacobians()),
            _first_failure("whitney_gallery", verdicts()),
            _first_failure("whitney_w_implies_a", w_implies_a()),
        ]

    # --- bundled files -----------------------------------------------------------------

    def file_checks(self) -> list[CheckResult]:
        """Every bundled complex and pair file.

        Unreadable files raise `ConfigError` so that the command exits with code 1.
        """
        results = []
        complexes = sorted(glob.glob(os.path.join(self.configs_dir, "complexes", "*.json")))
        pairs = sorted(glob.glob(os.path.join(self.configs_dir, "pairs", "*.json")))
        if not complexes and not pairs:
            self.logger.warning(f"no bundled files under {self.configs_dir}")
        for path in complexes:
            complex_ = load_complex(path)
            name = f"files_complex_{os.path.splitext(os.path.basename(path))[0]}"
            results.append(_first_failure(name, _complex_file_cases(complex_, path)))
        for path in pairs:
            pair = load_pair(path)
            name = f"files_pair_{os.path.splitext(os.path.basename(path))[0]}"
            results.append(_first_failure(name, self._expected(pair, self._pair_verdicts(pair))))
        return results

    def run(self, selection: Optional[str] = None) -> list[CheckResult]:
        """Runs the groups whose name contains ``selection`` (all when None)."""
        runners: dict[str, Callable[[], list[CheckResult]]] = {
            "ordinal": self.ordinal_checks,
            "tame1d": self.tame1d_checks,
            "cellcomplex": self.cellcomplex_checks,
            "whitney": self.whitney_checks,
            "files": self.file_checks,
        }
        results = []
        for group in GROUPS:
            if selection and selection not in group:
                continue
            self.logger.info(f"selftest: running {group} checks")
            results.extend(runners[group]())
        return results


def _complex_file_cases(complex_, path: str) -> Iterable[str]:
    with open(path, "r", encoding="utf-8") as file:
        expected = json.load(file).get("expected_rank")
    for result in validate(complex_):
        if not result.passed:
            yield f"{result.name}: {result.witness}"
    rank = pillay_rank(complex_)
    if expected is not None and rank != expected:
        yield f"rkP = {rank}, expected {expected}"
    if rank != pillay_rank_oracle(complex_):
        yield f"rkP = {rank} disagrees with the oracle"


def _jacobian_mismatches(chart, sheet, rng: np.random.Generator, name: str) -> Iterable[str]:
    lows, highs = np.array(chart.lows), np.array(chart.highs)
    for _ in range(JACOBIAN_PROBES):
        params = lows + (highs - lows) * rng.uniform(0.05, 0.95, size=len(lows))
        exact = chart.jacobian(params, sheet)
        columns = []
        for index in range(len(params)):
            step = np.zeros(len(params))
            step[index] = FD_STEP * max(1.0, abs(params[index]))
            forward, backward = chart.point(params + step, sheet), chart.point(params - step, sheet)
            columns.append((forward - backward) / (2 * step[index]))
        approx = np.column_stack(columns)
        error = np.linalg.norm(exact - approx)
        if error > FD_TOLERANCE * max(1.0, np.linalg.norm(exact)):
            yield f"{name} sheet {sheet} at {params}: finite difference error {error:.3g}"


def _with_settings(pair: PairSpec, settings) -> PairSpec:
    return PairSpec(pair.name, pair.x, pair.y, pair.base_point, settings, pair.expected)


def run_selftest(
    config: RunConfig,
    seed: int,
    selection: Optional[str] = None,
    jobs: int = 1,
    configs_dir: str = "configs",
) -> list[CheckResult]:
    """Runs the acceptance suite.

    Args:
        config (RunConfig): Sizes and thresholds.
        seed (int): Seed of the randomized checks.
        selection (Optional[str]): Group filter such as ``ordinal``.
        jobs (int): Worker threads for the Whitney sweeps.
        configs_dir (str): Directory of the bundled files.

    Returns:
        list[CheckResult]: One result per check.
    """
    return SelfTest(config, seed, jobs, configs_dir).run(selection)
