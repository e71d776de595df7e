from dataclasses import dataclass
from pathlib import Path

from pydantic import BaseModel, ConfigDict, Field, field_validator

from ..engine.hashing import MASK64
from ..engine.traffic import DEFAULT_ALPHA, DEFAULT_FLOWS, DEFAULT_PACKETS
from .dimension import PublishedRate


class ExperimentConfig(BaseModel):
    """One accuracy experiment: every (depth, width) cell of the grid, for every seed."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    n_flows: int = Field(DEFAULT_FLOWS, gt=0)
    alpha: float = Field(DEFAULT_ALPHA, gt=0)
    total_packets: int = Field(DEFAULT_PACKETS, gt=0)
    seeds: tuple[int, ...] = Field(min_length=1)
    k: int = Field(20, gt=0)
    grid: tuple[tuple[int, int], ...] = Field(min_length=1)
    out_dir: Path
    workers: int = Field(1, gt=0)
    snapshots: bool = False

    @field_validator("seeds")
    @classmethod
    def _seeds_are_distinct_u64(cls, seeds: tuple[int, ...]) -> tuple[int, ...]:
        for seed in seeds:
            if not 0 <= seed <= MASK64:
                raise ValueError(f"seed {seed} does not fit in 64 unsigned bits")
        if len(set(seeds)) != len(seeds):
            raise ValueError("seeds must be distinct")
        return seeds

    @field_validator("grid")
    @classmethod
    def _cells_are_distinct_and_positive(cls, grid: tuple[tuple[int, int], ...]) -> tuple[tuple[int, int], ...]:
        for depth, width in grid:
            if depth < 1 or width < 1:
                raise ValueError(f"grid cell ({depth}, {width}) must have depth and width >= 1")
        if len(set(grid)) != len(grid):
            raise ValueError("grid cells must be distinct")
        return grid


@dataclass(frozen=True)
class SummaryRow:
    depth: int
    width: int
    seed: int
    mean_abs_error: float
    precision: float
    recall: float
    updates_per_sec: float


@dataclass(frozen=True)
class CellResult:
    summary: SummaryRow
    report_path: Path
    sidecar_path: Path
    memory_bits: int  # at 64-bit counters
    snapshot_path: Path | None = None


@dataclass(frozen=True)
class RunResult:
    config: ExperimentConfig
    cells: tuple[CellResult, ...]  # seed-major, grid order within a seed
    summary_path: Path


@dataclass(frozen=True)
class Headroom:
    published: PublishedRate
    ratio: float  # measured updates/s over the published packet rate


@dataclass(frozen=True)
class BenchReport:
    depth: int
    width: int
    packets: int
    seed: int
    repetitions: int
    update_rate: float  # median updates/s, one `update` call per packet
    ingest_rate: float  # median updates/s, batch `ingest`
    headroom: tuple[Headroom, ...]
