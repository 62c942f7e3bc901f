"""
This module is the command line entry point of tametop. It dispatches the subcommands
``tame1d``, ``ordinal``, ``complex``, ``whitney`` and ``selftest`` to the engines and
maps their outcome to the exit code: 0 for success, 1 for computation or input errors,
2 for verification failures.

Classes:
    TameTopRunner: Runs one parsed command against a run configuration.

Usage:
    tametop tame1d rank "nested_chain(3)"
    tametop complex rkp configs/complexes/chain3.json
    tametop whitney --pair stacked-lines --cond b --expect FAILS
    tametop selftest --filter ordinal
"""

import argparse
import json
import sys
from logging import Logger
from typing import Callable, Optional, Sequence

import numpy as np
import yaml

from tametop import __version__
from tametop.cellcomplex.complex import validate
from tametop.cellcomplex.loader import load_complex
from tametop.cellcomplex.rank import check_rank_inequalities, pillay_rank, pillay_rank_oracle
from tametop.cli.config_parser import RunConfig, parse_run_config
from tametop.cli.selftest import run_selftest
from tametop.exceptions import TameTopError
from tametop.ordinal import Ordinal, add, cmp, mul_nat, natural_sum, omega_pow
from tametop.report import all_passed, render
from tametop.tame1d.parser import parse_set
from tametop.tame1d.ranks import cb_rank, classify_discrete, decompose_discrete, dim, gap_delta
from tametop.tame1d.rational import format_ext
from tametop.tame1d.stratify import StratificationFailed, stratify_line
from tametop.tame1d.tameset import Tame1DSet, set_enumeration_cap
from tametop.tame1d.topology import (
    boundary,
    closure,
    constructible_depth,
    decompose_locally_closed,
    frontier,
    interior,
    isolated_points,
    lc_part,
    nlc_part,
)
from tametop.utils import get_logger, resolve_seed, set_verbosity, update_log_file
from tametop.whitney.conditions import Condition, PairSpec, SweepSettings, check_all
from tametop.whitney.gallery import GALLERY, gallery
from tametop.whitney.loader import load_pair

LOGGER: Logger = get_logger()

EXIT_OK: int = 0
EXIT_ERROR: int = 1
EXIT_VERIFICATION: int = 2

TAME1D_ACTIONS: tuple[str, ...] = (
    "rank",
    "frontier",
    "lc",
    "depth",
    "stratify",
    "decompose",
    "closure",
    "interior",
    "boundary",
    "isolated",
    "dim",
    "classify",
    "delta",
)
ORDINAL_ACTIONS: tuple[str, ...] = ("normalize", "add", "natural-sum", "mul", "omega-pow", "cmp")
COMPLEX_ACTIONS: tuple[str, ...] = ("validate", "rkp", "inequalities")


def _format_dim(value) -> str:
    return "-oo" if value == float("-inf") else str(value)


class TameTopRunner:
    """
    Runs one parsed command.

    Attributes:
        config (RunConfig): The run configuration.
        seed (int): Seed for randomized checks.
        jobs (int): Worker threads for Whitney sweeps.
    """

    def __init__(self, config: RunConfig, args: argparse.Namespace) -> None:
        """
        Initializes the runner and applies the engine limits of the configuration.

        Args:
            config (RunConfig): Parsed run configuration.
            args (argparse.Namespace): Parsed command line.
        """
        self.config: RunConfig = config
        self.args: argparse.Namespace = args
        self.seed: int = resolve_seed(args.seed, config.seed)
        self.jobs: int = args.jobs if args.jobs is not None else config.whitney.jobs
        set_enumeration_cap(config.tame1d.enumeration_cap)

    def run(self) -> int:
        """Dispatches to the subcommand and returns the exit code."""
        handlers: dict[str, Callable[[], int]] = {
            "tame1d": self.run_tame1d,
            "ordinal": self.run_ordinal,
            "complex": self.run_complex,
            "whitney": self.run_whitney,
            "selftest": self.run_selftest,
        }
        return handlers[self.args.command]()

    # --- tame1d ------------------------------------------------------------------------

    def _set_results(self, a: Tame1DSet) -> dict:
        action = self.args.action
        if action == "rank":
            return {"cb_rank": cb_rank(a)}
        if action == "frontier":
            return {"frontier": frontier(a)}
        if action == "lc":
            return {"lc": lc_part(a), "nlc": nlc_part(a)}
        if action == "depth":
            return {"depth": constructible_depth(a)}
        if action == "decompose":
            if self.args.discrete is not None:
                pieces = decompose_discrete(a, self.args.discrete)
            else:
                pieces = decompose_locally_closed(a)
            return {f"piece {index}": piece for index, piece in enumerate(pieces)}
        if action == "closure":
            return {"closure": closure(a)}
        if action == "interior":
            return {"interior": interior(a)}
        if action == "boundary":
            return {"boundary": boundary(a)}
        if action == "isolated":
            return {"isolated": isolated_points(a)}
        if action == "dim":
            return {"dim": _format_dim(dim(a))}
        if action == "classify":
            return {"classify": classify_discrete(a)}
        return {"delta": format_ext(gap_delta(a))}

    def run_tame1d(self) -> int:
        """Evaluates a set expression and prints the requested computation."""
        a = parse_set(self.args.expr)
        if self.args.action == "stratify":
            return self._stratify(a)
        results = self._set_results(a)
        if self.args.json:
            payload = {
                key: value.to_dict() if isinstance(value, Tame1DSet) else str(value)
                for key, value in results.items()
            }
            print(json.dumps(payload, indent=2, sort_keys=True))
        else:
            for key, value in results.items():
                print(f"{key}: {value}")
        return EXIT_OK

    def _stratify(self, a: Tame1DSet) -> int:
        family = [a] + [parse_set(text) for text in self.args.more]
        try:
            strat = stratify_line(family, self.config.tame1d.fixpoint_cap)
        except StratificationFailed as exc:
            print(f"frontier_condition: FAIL {exc}")
            return EXIT_VERIFICATION
        if self.args.json:
            payload = {
                "strata": [
                    {"dim": s.dim, "set": str(s), "frontier": list(strat.frontier_table[i])}
                    for i, s in enumerate(strat.strata)
                ],
                "rounds": strat.rounds,
                "frontier_condition": "PASS" if strat.frontier_condition else "FAIL",
            }
            print(json.dumps(payload, indent=2, sort_keys=True))
        else:
            for index, stratum in enumerate(strat.strata):
                below = ",".join(str(i) for i in strat.frontier_table[index]) or "-"
                print(f"stratum {index} dim {stratum.dim}: {stratum} frontier [{below}]")
            print(render(strat.report))
            print(f"frontier_condition: {'PASS' if strat.frontier_condition else 'FAIL'}")
        return EXIT_OK if strat.frontier_condition else EXIT_VERIFICATION

    # --- ordinal -----------------------------------------------------------------------

    def run_ordinal(self) -> int:
        """Ordinal arithmetic on literals such as ``w^2*3 + w + 4``."""
        action, operands = self.args.action, self.args.operands
        needed = {"normalize": 1, "omega-pow": 1, "add": 2, "natural-sum": 2, "cmp": 2, "mul": 2}
        if len(operands) != needed[action]:
            raise TameTopError(f"ordinal {action} takes {needed[action]} operand(s)")
        if action == "mul":
            result = mul_nat(Ordinal.parse(operands[0]), int(operands[1]))
        else:
            values = [Ordinal.parse(text) for text in operands]
            if action == "normalize":
                result = values[0]
            elif action == "omega-pow":
                result = omega_pow(values[0])
            elif action == "add":
                result = add(values[0], values[1])
            elif action == "natural-sum":
                result = natural_sum(values[0], values[1])
            else:
                print(cmp(values[0], values[1]).name.lower())
                return EXIT_OK
        print(result)
        return EXIT_OK

    # --- complex -----------------------------------------------------------------------

    def run_complex(self) -> int:
        """Validation, Pillay rank or the rank inequality checks of a complex file."""
        complex_ = load_complex(self.args.path)
        results = validate(complex_)
        if self.args.action == "validate":
            print(render(results))
            return EXIT_OK
        if self.args.action == "rkp":
            if self.args.oracle:
                rank = pillay_rank_oracle(complex_, limit=self.config.complex.oracle_limit)
            else:
                rank = pillay_rank(complex_)
            print(f"rkP = {rank}")
            return EXIT_OK
        rng = np.random.default_rng(self.seed)
        results = check_rank_inequalities(complex_, rng, self.config.complex.samples)
        print(render(results))
        return EXIT_OK if all_passed(results) else EXIT_VERIFICATION

    # --- whitney -----------------------------------------------------------------------

    def _pair(self) -> PairSpec:
        name = self.args.pair
        pair = gallery(name) if name in GALLERY else load_pair(name)
        base = self.config.whitney.settings() if name in GALLERY else pair.settings
        settings = SweepSettings(
            r0=base.r0,
            scales=self.args.scales or base.scales,
            samples=self.args.samples or base.samples,
            tol_hold=base.tol_hold,
            tol_fail=base.tol_fail,
            window=base.window,
            hold_ratio=base.hold_ratio,
            growth=base.growth,
            sheet_cap_factor=base.sheet_cap_factor,
        )
        return PairSpec(pair.name, pair.x, pair.y, pair.base_point, settings, pair.expected)

    def run_whitney(self) -> int:
        """Sweeps one condition on a gallery pair or a pair file."""
        pair = self._pair()
        condition = Condition(self.args.cond)
        verdict = check_all(pair, self.seed, self.jobs, [condition])[condition]
        print(f"pair: {pair.name} condition: {condition.value}")
        print(verdict.line())
        print(f"final: {verdict.final!r} growth: {verdict.growth!r} median: {verdict.median!r}")
        csv = verdict.sweep.to_csv()
        if self.args.csv_out:
            with open(self.args.csv_out, "w", encoding="utf-8") as file:
                file.write(csv)
            LOGGER.info(f"sweep written to {self.args.csv_out}")
        else:
            sys.stdout.write(csv)
        if self.args.expect and verdict.kind.value != self.args.expect:
            LOGGER.error(f"expected {self.args.expect}, got {verdict.kind.value}")
            return EXIT_VERIFICATION
        return EXIT_OK

    # --- selftest ----------------------------------------------------------------------

    def run_selftest(self) -> int:
        """Runs the acceptance suite and prints one line per check."""
        results = run_selftest(
            self.config, self.seed, self.args.filter, self.jobs, self.args.configs_dir
        )
        print(render(results))
        passed = sum(result.passed for result in results)
        print(f"selftest: {passed}/{len(results)} checks passed (seed {self.seed})")
        return EXIT_OK if all_passed(results) else EXIT_VERIFICATION


def parse_cli_args(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    """
    Parses the command line.

    Args:
        argv (Optional[Sequence[str]]): Arguments without the program name; ``sys.argv``
            when None.

    Returns:
        argparse.Namespace: Parsed CLI arguments.
    """
    parser = argparse.ArgumentParser(
        prog="tametop", description="Exact and numerical tame topology toolkit."
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument(
        "--config", type=str, default=None, help="YAML run configuration (configs/default.yml)."
    )
    parser.add_argument("--seed", type=int, default=None, help="Seed of randomized checks.")
    parser.add_argument("--jobs", type=int, default=None, help="Worker threads for sweeps.")
    parser.add_argument(
        "-v", "--verbose", action="count", default=0, help="-v for info, -vv for debug logs."
    )
    parser.add_argument("--log-file", type=str, default=None, help="Also log to this file.")
    commands = parser.add_subparsers(dest="command", required=True)

    tame1d = commands.add_parser("tame1d", help="Exact set calculus on the line.")
    tame1d.add_argument("action", choices=TAME1D_ACTIONS)
    tame1d.add_argument("expr", help='Set expression, e.g. "nested_chain(3)".')
    tame1d.add_argument("more", nargs="*", help="Further family members for stratify.")
    tame1d.add_argument("--json", action="store_true", help="Print JSON instead of text.")
    tame1d.add_argument(
        "--discrete", type=int, default=None, help="decompose into N discrete layers."
    )

    ordinal = commands.add_parser("ordinal", help="Ordinal arithmetic below epsilon_0.")
    ordinal.add_argument("action", choices=ORDINAL_ACTIONS)
    ordinal.add_argument("operands", nargs="+", help='Literals such as "w^2*3 + 1".')

    complex_ = commands.add_parser("complex", help="Pillay rank on finite complexes.")
    complex_.add_argument("action", choices=COMPLEX_ACTIONS)
    complex_.add_argument("path", help="Complex JSON file.")
    complex_.add_argument("--oracle", action="store_true", help="Use the brute-force rank.")

    whitney = commands.add_parser("whitney", help="Whitney (a), (b) and Verdier (w) sweeps.")
    whitney.add_argument("--pair", required=True, help="Gallery name or pair JSON file.")
    whitney.add_argument("--cond", required=True, choices=[c.value for c in Condition])
    whitney.add_argument("--scales", type=int, default=None)
    whitney.add_argument("--samples", type=int, default=None)
    whitney.add_argument("--csv-out", type=str, default=None, help="Write the sweep CSV here.")
    whitney.add_argument("--expect", choices=["HOLDS", "FAILS", "INCONCLUSIVE"], default=None)

    selftest = commands.add_parser("selftest", help="Run the acceptance suite.")
    selftest.add_argument("--filter", type=str, default=None, help="Run matching groups only.")
    selftest.add_argument(
        "--configs-dir", type=str, default="configs", help="Bundled complexes and pairs."
    )
    return parser.parse_args(argv)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Console entry point; returns the exit code."""
    args: argparse.Namespace = parse_cli_args(argv)
    set_verbosity(args.verbose)
    if args.log_file:
        update_log_file(args.log_file)
    try:
        config: RunConfig = parse_run_config(args.config)
        runner: TameTopRunner = TameTopRunner(config, args)
        return runner.run()
    except (TameTopError, OSError, ValueError, json.JSONDecodeError, yaml.YAMLError) as exc:
        LOGGER.debug("command failed", exc_info=True)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
