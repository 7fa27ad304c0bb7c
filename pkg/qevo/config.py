"""Sectioned configuration.

A configuration file is TOML with one table per section:

    [run]
    seed = 1

    [population]
    size = 100
    min_depth = 5
    max_depth = 15

    [evolutionary]
    strategies = ["swap", "delete"]
    mutation_rate = 0.25

Every key is optional and falls back to its default; unknown keys are
rejected. `qevo --help config` lists the keys, their defaults and domains.

"""
import logging
import os
import re
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Tuple, Union

import tomli_w
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from pydantic import ValidationError as PydanticValidationError

from qevo.errors import ConfigError, ConfigParseError, RangeError, UnknownKey
from qevo.evaluation import EvalMode, default_workers
from qevo.evolution.generation import EvolutionConfig
from qevo.evolution.mutations import MutationConfig, Strategy, canonical
from qevo.fitness import FitnessWeights
from qevo.islands import IslandConfig

__all__ = [
    "Config",
    "describe_config",
    "dump_config",
    "load_config",
    "override",
    "parse_config",
]

logger = logging.getLogger(__name__)

WORKERS_ENV = "QEVO_WORKERS"


class Section(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class RunSection(Section):
    seed: Optional[int] = Field(
        None, ge=0, description="Root seed; drawn from entropy and logged when unset."
    )
    qubit_limit: int = Field(12, ge=1, le=20, description="Largest simulated register.")
    optimize_final: bool = Field(True, description="Optimize the best final candidate.")
    optimize_each_eval: bool = Field(
        False, description="Score every candidate on its optimized genome."
    )
    progress_bar: bool = Field(True, description="Display a progress bar.")
    trial_timeout: float = Field(
        1800.0, gt=0, description="Wall-clock budget of a run or trial, in seconds."
    )


class PopulationSection(Section):
    size: int = Field(100, ge=2, description="Number of candidates.")
    min_depth: int = Field(5, ge=1, description="Shortest genome.")
    max_depth: int = Field(15, ge=1, description="Longest genome.")
    elite_count: int = Field(2, ge=0, description="Elites copied to the next generation.")
    immigrant_count: int = Field(
        5, ge=0, description="Random candidates injected every generation."
    )
    tournament_k: int = Field(3, ge=1, description="Parent tournament size.")
    elite_tournament_k: Optional[int] = Field(
        None, ge=1, description="Elite tournament size; the population size when unset."
    )

    @model_validator(mode="after")
    def check_counts(self):
        if self.min_depth > self.max_depth:
            raise ValueError("min_depth must not exceed max_depth")
        if self.elite_count + self.immigrant_count >= self.size:
            raise ValueError("elite_count + immigrant_count must be below size")
        if self.tournament_k > self.size:
            raise ValueError("tournament_k must not exceed size")
        return self


class IslandSection(Section):
    enabled: bool = Field(False, description="Split the population into islands.")
    count: int = Field(4, ge=1, description="Number of islands.")
    migration_interval: int = Field(10, ge=1, description="Generations between migrations.")
    migration_count: int = Field(2, ge=1, description="Migrants sent by each island.")
    warmup_fraction: float = Field(
        0.5, ge=0.0, le=1.0, description="Share of the run before migrations start."
    )


class FitnessSection(Section):
    w_fidelity: float = Field(1.0, gt=0.0, description="Weight of the fidelity.")
    w_depth: float = Field(0.1, ge=0.0, description="Weight of the depth penalty.")
    w_tops: float = Field(0.05, ge=0.0, description="Weight of the T-count penalty.")
    d_max: Optional[int] = Field(
        None, ge=1, description="Depth normalizing the penalties; max_depth when unset."
    )
    success_fidelity: float = Field(
        0.95, ge=0.0, le=1.0, description="Fidelity counted as a success in reports."
    )


class EvolutionarySection(Section):
    generations: int = Field(150, ge=1, description="Generation cap.")
    stop_fidelity: float = Field(
        0.99, ge=0.0, le=1.0, description="Stop once a candidate reaches this fidelity."
    )
    strategies: List[Strategy] = Field(
        default_factory=lambda: list(Strategy),
        min_length=1,
        description="Enabled mutation strategies.",
    )
    mutation_rate: float = Field(
        0.25, ge=0.0, le=1.0, description="Probability to mutate an offspring."
    )
    mutations_per_candidate: int = Field(
        1, ge=1, description="Mutations applied to a mutated offspring."
    )
    adaptive: bool = Field(False, description="Adapt the rate to diversity and progress.")
    adaptive_alpha: float = Field(0.5, ge=0.0, description="Diversity sensitivity.")
    adaptive_beta: float = Field(
        0.3, ge=0.0, le=1.0, description="Share of the rate left at the last generation."
    )
    diversity_sample: int = Field(
        20, ge=2, description="Candidates sampled to measure diversity."
    )

    @field_validator("strategies")
    @classmethod
    def canonical_order(cls, strategies):
        return list(canonical(strategies))


class ParallelSection(Section):
    mode: EvalMode = Field(EvalMode.AUTO, description="Evaluation mode.")
    workers: Optional[int] = Field(
        None, ge=1, description=f"Evaluation threads; ${WORKERS_ENV} overrides it."
    )


class Config(Section):
    run: RunSection = Field(default_factory=RunSection)
    population: PopulationSection = Field(default_factory=PopulationSection)
    island: IslandSection = Field(default_factory=IslandSection)
    fitness: FitnessSection = Field(default_factory=FitnessSection)
    evolutionary: EvolutionarySection = Field(default_factory=EvolutionarySection)
    parallel: ParallelSection = Field(default_factory=ParallelSection)

    @model_validator(mode="after")
    def check_islands(self):
        if not self.island.enabled:
            return self
        per_island = self.population.size // self.island.count
        if self.population.elite_count + self.population.immigrant_count >= per_island:
            raise ValueError(
                f"island: elite_count + immigrant_count must be below the island size"
                f" {per_island}"
            )
        if self.island.migration_count >= per_island:
            raise ValueError(
                f"island: migration_count must be below the island size {per_island}"
            )
        return self

    # Translation to the module configurations.

    @property
    def d_max(self) -> int:
        return self.fitness.d_max or self.population.max_depth

    @property
    def workers(self) -> int:
        value = os.environ.get(WORKERS_ENV)
        if value:
            try:
                return max(1, int(value))
            except ValueError:
                raise RangeError(
                    f"{WORKERS_ENV} must be an integer, got {value!r}."
                ) from None
        return self.parallel.workers or default_workers()

    def weights(self) -> FitnessWeights:
        f = self.fitness
        return FitnessWeights(f.w_fidelity, f.w_depth, f.w_tops)

    def mutation_config(self) -> MutationConfig:
        e = self.evolutionary
        return MutationConfig(
            strategies=tuple(e.strategies),
            rate=e.mutation_rate,
            mutations_per_candidate=e.mutations_per_candidate,
            adaptive=e.adaptive,
            alpha=e.adaptive_alpha,
            beta=e.adaptive_beta,
        )

    def evolution_config(self) -> EvolutionConfig:
        p, e = self.population, self.evolutionary
        return EvolutionConfig(
            population_size=p.size,
            elite_count=p.elite_count,
            immigrant_count=p.immigrant_count,
            tournament_k=p.tournament_k,
            min_depth=p.min_depth,
            max_depth=p.max_depth,
            mutation=self.mutation_config(),
            generations=e.generations,
            stop_fidelity=e.stop_fidelity,
            elite_tournament_k=p.elite_tournament_k,
            diversity_sample=e.diversity_sample,
        )

    def island_config(self) -> Optional[IslandConfig]:
        i = self.island
        if not i.enabled:
            return None
        return IslandConfig(
            count=i.count,
            migration_interval=i.migration_interval,
            migration_count=i.migration_count,
            warmup_fraction=i.warmup_fraction,
        )


# --------------------------------------------------------------------
#                     == LOADING ==
# --------------------------------------------------------------------


def _location(error) -> str:
    return ".".join(str(part) for part in error["loc"])


def _validate(data: Mapping[str, Any]) -> Config:
    try:
        return Config.model_validate(data)
    except PydanticValidationError as e:
        errors = e.errors()
        unknown = [err for err in errors if err["type"] == "extra_forbidden"]
        if unknown:
            keys = ", ".join(_location(err) for err in unknown)
            raise UnknownKey(f"unknown configuration key(s): {keys}") from e
        messages = "; ".join(
            f"{_location(err) or 'config'}: {err['msg']}" for err in errors
        )
        raise RangeError(messages) from e


def parse_config(text: str) -> Config:
    """Parse and validate the TOML text of a configuration."""
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as e:
        match = re.search(r"line (\d+)", str(e))
        raise ConfigParseError(str(e), int(match.group(1)) if match else None) from e
    return _validate(data)


def load_config(path: Union[str, Path, None] = None) -> Config:
    """Load a configuration file; without a path, return the defaults."""
    if path is None:
        config = Config()
    else:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as e:
            raise ConfigError(f"cannot read the configuration {path}: {e.strerror}") from e
        config = parse_config(text)
    logger.info("config: effective configuration\n%s", dump_config(config))
    return config


def dump_config(config: Config) -> str:
    """The configuration as TOML; unset optional keys are omitted."""
    return tomli_w.dumps(config.model_dump(mode="json", exclude_none=True))


def override(config: Config, values: Mapping[str, Any]) -> Config:
    """A copy of the configuration with `section.key` values replaced.

    >>> override(config, {"run.seed": 3, "island.enabled": True})
    """
    data = config.model_dump(mode="json", exclude_none=True)
    for dotted, value in values.items():
        section, _, key = dotted.partition(".")
        if not key:
            raise UnknownKey(f"expected a 'section.key' name, got {dotted!r}")
        data.setdefault(section, {})[key] = value
    return _validate(data)


# --------------------------------------------------------------------
#                     == DOCUMENTATION ==
# --------------------------------------------------------------------


def _domain(prop: Dict[str, Any], defs: Dict[str, Any]) -> str:
    if "anyOf" in prop:
        options = [p for p in prop["anyOf"] if p.get("type") != "null"]
        return _domain(options[0], defs) + " (optional)" if options else "any"
    if "$ref" in prop or "allOf" in prop:
        ref = prop.get("$ref") or prop["allOf"][0]["$ref"]
        return "one of " + ", ".join(defs[ref.rsplit("/", 1)[-1]]["enum"])
    if prop.get("type") == "array":
        return "list, each " + _domain(prop["items"], defs)

    bounds: List[Tuple[str, Any]] = [
        (symbol, prop[key])
        for key, symbol in (
            ("minimum", ">="),
            ("exclusiveMinimum", ">"),
            ("maximum", "<="),
            ("exclusiveMaximum", "<"),
        )
        if key in prop
    ]
    text = prop.get("type", "any")
    if bounds:
        text += " " + ", ".join(f"{symbol} {value}" for symbol, value in bounds)
    return text


def describe_config() -> str:
    """Every configuration key with its default, domain and meaning."""
    lines = []
    for section, field in Config.model_fields.items():
        model = field.default_factory
        schema = model.model_json_schema()
        defs = schema.get("$defs", {})
        lines.append(f"[{section}]")
        for key, prop in schema["properties"].items():
            default = model.model_fields[key].get_default(call_default_factory=True)
            if isinstance(default, list):
                default = [getattr(v, "value", v) for v in default]
            default = getattr(default, "value", default)
            lines.append(
                f"  {key} = {default!r:<10} {_domain(prop, defs)}."
                f" {prop.get('description', '')}"
            )
        lines.append("")
    return "\n".join(lines)
