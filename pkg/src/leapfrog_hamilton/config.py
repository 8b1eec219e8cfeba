from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .oracle import DEFAULT_CYCLE_CAP, DEFAULT_MAX_VERTICES, DEFAULT_TIME_BUDGET_MS

COMMANDS = ("certify", "leapfrog", "oracle", "export")
FORMATS = ("json", "dot")
ORACLE_KINDS = ("hamilton", "decompositions")
KIND_FILTERS = ("proper", "improper", "all")
PATH_FIELDS = ("input", "output", "artifacts", "graph")


@dataclass
class SeedPair:
    hexagon: int
    pentagon: int

    def as_tuple(self) -> tuple[int, int]:
        return self.hexagon, self.pentagon


@dataclass
class OracleLimits:
    cap_cycles: int | None = DEFAULT_CYCLE_CAP
    time_budget_ms: int | None = DEFAULT_TIME_BUDGET_MS
    max_vertices: int = DEFAULT_MAX_VERTICES


@dataclass
class RunConfig:
    command: str = "certify"
    input: Path | None = None
    output: Path | None = None
    seed: SeedPair | None = None
    oracle_limits: OracleLimits = field(default_factory=OracleLimits)
    verbosity: int = 0
    workers: int = 1
    format: str = "json"
    materialize_tree: bool = False
    artifacts: Path | None = None
    oracle: str = "hamilton"
    filter: str = "all"
    on_leapfrog: bool = False
    graph: Path | None = None
    index: int | None = None
