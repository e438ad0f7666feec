"""Bundled data registries and run configuration."""

import json
import logging
import os
from collections.abc import Mapping
from dataclasses import dataclass, fields, replace
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Any

from .automorphisms import BaseAutomorphismSpec, automorphism_from_json
from .lattice import GlueSpec

logger = logging.getLogger(__name__)

WORKERS_ENV = "HOLOMORPHIC_ORBIFOLDS_WORKERS"
MIN_ORBIFOLD_TERMS = 4

_DATA = resources.files("holomorphic_orbifolds") / "data"


def load_data(name: str) -> Any:  # noqa: ANN401
    """Parse a bundled JSON file."""
    return json.loads((_DATA / name).read_text(encoding="utf-8"))


def _glue_table() -> dict[str, GlueSpec]:
    table = {}
    for name, entry in load_data("niemeier_glue.json").items():
        table[name] = GlueSpec.parse(entry["components"], entry.get("glue", ()), name)
    return table


# Niemeier lattices by name, as root lattice components plus glue code
NIEMEIER_GLUE: dict[str, GlueSpec] = _glue_table()


def _automorphism_table() -> dict[str, BaseAutomorphismSpec]:
    table = {}
    for item in sorted((_DATA / "automorphisms").iterdir(), key=lambda p: p.name):
        if not item.name.endswith(".json"):
            continue
        data = json.loads(item.read_text(encoding="utf-8"))
        spec = automorphism_from_json(data, NIEMEIER_GLUE)
        table[item.name.removesuffix(".json")] = spec
    return table


# Structured automorphisms of Niemeier lattices whose orbifolds are computed
AUTOMORPHISMS: dict[str, BaseAutomorphismSpec] = _automorphism_table()


@lru_cache(maxsize=1)
def candidate_table() -> dict[int, tuple[str, ...]]:
    """Feasible affine structures by dim V_1."""
    return {int(dim): tuple(names) for dim, names in load_data("candidates_by_dim.json").items()}


@lru_cache(maxsize=1)
def expected_verdicts() -> dict[str, Any]:
    """Regression table for the classification: summary counts and spot checks."""
    return load_data("expected_verdicts.json")


def resolve_automorphism(source: str) -> BaseAutomorphismSpec:
    """A bundled automorphism by name, or one read from a JSON file.

    Raises:
        ValueError: If neither a bundled name nor a readable file matches.

    """
    path = Path(source)
    if not path.is_file():
        if path.stem in AUTOMORPHISMS:
            return AUTOMORPHISMS[path.stem]
        msg = f"Unknown automorphism {source!r}; bundled: {', '.join(AUTOMORPHISMS)}"
        raise ValueError(msg)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        msg = f"{path} is not valid JSON: {e}"
        raise ValueError(msg) from e
    return automorphism_from_json(data, NIEMEIER_GLUE)


@dataclass(frozen=True)
class RunConfig:
    """Settings shared by the command line subcommands."""

    command: str = ""
    input: str | None = None
    output: str | None = None
    terms: int = MIN_ORBIFOLD_TERMS
    workers: int = 1
    branch_budget: int = 40
    pivot_budget: int = 10**6
    node_budget: int = 20000
    seed: int = 24
    point_margin: int = 2
    verbosity: int = 0

    def __post_init__(self) -> None:
        for name in ("workers", "branch_budget", "pivot_budget", "node_budget", "terms"):
            if getattr(self, name) < 1:
                msg = f"{name} must be positive, got {getattr(self, name)}"
                raise ValueError(msg)
        if self.point_margin < 0:
            msg = f"point_margin must be nonnegative, got {self.point_margin}"
            raise ValueError(msg)
        if self.command == "orbifold" and self.terms < MIN_ORBIFOLD_TERMS:
            msg = f"Orbifold runs need at least {MIN_ORBIFOLD_TERMS} terms, got {self.terms}"
            raise ValueError(msg)


_INT_FIELDS = {f.name for f in fields(RunConfig) if f.type in (int, "int")}
_STR_FIELDS = {"command", "input", "output"}


def parse_config_file(path: str | Path) -> dict[str, str]:
    """Read ``key = value`` lines; ``#`` starts a comment.

    Raises:
        ValueError: On malformed lines or unknown keys.

    """
    values: dict[str, str] = {}
    text = Path(path).read_text(encoding="utf-8")
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip().replace("-", "_")
        if not sep or not key:
            msg = f"{path}:{number}: expected 'key = value'"
            raise ValueError(msg)
        if key not in _INT_FIELDS | _STR_FIELDS:
            msg = f"{path}:{number}: unknown setting {key!r}"
            raise ValueError(msg)
        values[key] = value.strip()
    return values


def _coerce(values: Mapping[str, Any]) -> dict[str, Any]:
    result: dict[str, Any] = {}
    for key, value in values.items():
        if value is None:
            continue
        if key in _INT_FIELDS:
            try:
                result[key] = int(value)
            except (TypeError, ValueError):
                msg = f"Setting {key} must be an integer, got {value!r}"
                raise ValueError(msg) from None
        else:
            result[key] = value
    return result


def build_run_config(
    command: str,
    config_file: str | Path | None = None,
    flags: Mapping[str, Any] | None = None,
    environ: Mapping[str, str] | None = None,
) -> RunConfig:
    """Merge defaults, config file, environment and flags, later sources winning."""
    environ = os.environ if environ is None else environ
    merged: dict[str, Any] = {"command": command}
    if config_file is not None:
        merged.update(_coerce(parse_config_file(config_file)))
    if environ.get(WORKERS_ENV):
        merged["workers"] = _coerce({"workers": environ[WORKERS_ENV]})["workers"]
    known = {f.name for f in fields(RunConfig)}
    merged.update(_coerce({k: v for k, v in (flags or {}).items() if k in known}))
    config = replace(RunConfig(), **merged)
    logger.debug("run config: %s", config)
    return config
