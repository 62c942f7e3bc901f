"""Config Parser Module.

Reads the YAML run configuration (``configs/default.yml``) into dataclasses. Every
section and field is optional; missing values fall back to the engine defaults.
"""

from dataclasses import dataclass, field, fields
from typing import Optional

import yaml

from tametop.cellcomplex.rank import DEFAULT_SAMPLES, ORACLE_LIMIT
from tametop.exceptions import ConfigError
from tametop.tame1d.engine import DEFAULT_ENUMERATION_CAP
from tametop.tame1d.stratify import DEFAULT_FIXPOINT_CAP
from tametop.whitney.conditions import SweepSettings


@dataclass
class Tame1DConfig:
    """Limits of the exact line calculus."""

    enumeration_cap: int = DEFAULT_ENUMERATION_CAP
    fixpoint_cap: int = DEFAULT_FIXPOINT_CAP


@dataclass
class ComplexConfig:
    """Random complexes and rank checks."""

    max_cells: int = 7
    samples: int = DEFAULT_SAMPLES
    oracle_limit: int = ORACLE_LIMIT


@dataclass
class WhitneyConfig:
    """Scale sweep schedule and verdict thresholds."""

    r0: float = 0.25
    scales: int = 8
    samples: int = 64
    tol_hold: float = 1e-2
    tol_fail: float = 1e-1
    window: int = 4
    sheet_cap_factor: float = 4.0
    jobs: int = 1

    def settings(self) -> SweepSettings:
        """The sweep settings described by this section."""
        return SweepSettings(
            r0=self.r0,
            scales=self.scales,
            samples=self.samples,
            tol_hold=self.tol_hold,
            tol_fail=self.tol_fail,
            window=self.window,
            sheet_cap_factor=self.sheet_cap_factor,
        )


@dataclass
class SelftestConfig:
    """Sizes of the acceptance runs."""

    union_pairs: int = 200
    nlc_sets: int = 100
    random_complexes: int = 200
    chain_max: int = 6
    stratify_families: int = 50
    family_size: int = 5


@dataclass
class RunConfig:
    """Root configuration."""

    seed: Optional[int] = None
    tame1d: Tame1DConfig = field(default_factory=Tame1DConfig)
    complex: ComplexConfig = field(default_factory=ComplexConfig)
    whitney: WhitneyConfig = field(default_factory=WhitneyConfig)
    selftest: SelftestConfig = field(default_factory=SelftestConfig)


def _section(cls: type, data: Optional[dict], name: str, path: str):
    if data is None:
        return cls()
    if not isinstance(data, dict):
        raise ConfigError(f"section {name!r} must be a mapping", path)
    known = {item.name: item.type for item in fields(cls)}
    unknown = sorted(set(data) - set(known))
    if unknown:
        raise ConfigError(f"unknown keys {unknown} in section {name!r}", path)
    values = {}
    for key, value in data.items():
        caster = float if known[key] in (float, "float") else int
        try:
            values[key] = caster(value)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"{name}.{key}: {exc}", path) from exc
    return cls(**values)


def parse_tame1d(data: Optional[dict], path: str = "<config>") -> Tame1DConfig:
    """Parses the ``tame1d`` section.

    Args:
        data (Optional[dict]): The section, or None.
        path (str): File name used in error messages.

    Returns:
        Tame1DConfig: The parsed section.
    """
    return _section(Tame1DConfig, data, "tame1d", path)


def parse_complex(data: Optional[dict], path: str = "<config>") -> ComplexConfig:
    """Parses the ``complex`` section."""
    return _section(ComplexConfig, data, "complex", path)


def parse_whitney(data: Optional[dict], path: str = "<config>") -> WhitneyConfig:
    """Parses the ``whitney`` section."""
    return _section(WhitneyConfig, data, "whitney", path)


def parse_selftest(data: Optional[dict], path: str = "<config>") -> SelftestConfig:
    """Parses the ``selftest`` section."""
    return _section(SelftestConfig, data, "selftest", path)


def parse_run_config(config_path: Optional[str] = None) -> RunConfig:
    """Parses the run configuration from a YAML file.

    Args:
        config_path (Optional[str]): The YAML file; built-in defaults if None.

    Returns:
        RunConfig: The parsed configuration.

    Raises:
        ConfigError: On malformed YAML or unknown keys.
    """
    if config_path is None:
        return RunConfig()
    with open(config_path, "r", encoding="utf-8") as file:
        try:
            config_data = yaml.safe_load(file) or {}
        except yaml.YAMLError as exc:
            raise ConfigError(f"invalid YAML: {exc}", config_path) from exc
    if not isinstance(config_data, dict):
        raise ConfigError("top level must be a mapping", config_path)
    unknown = sorted(set(config_data) - {"seed", "tame1d", "complex", "whitney", "selftest"})
    if unknown:
        raise ConfigError(f"unknown sections {unknown}", config_path)
    seed = config_data.get("seed")
    if seed is not None and not isinstance(seed, int):
        raise ConfigError(f"seed must be an integer, got {seed!r}", config_path)
    return RunConfig(
        seed=seed,
        tame1d=parse_tame1d(config_data.get("tame1d"), config_path),
        complex=parse_complex(config_data.get("complex"), config_path),
        whitney=parse_whitney(config_data.get("whitney"), config_path),
        selftest=parse_selftest(config_data.get("selftest"), config_path),
    )
