from dataclasses import dataclass

from ..engine.hashing import MASK64
from ..errors import ConfigurationError


@dataclass(frozen=True)
class SketchConfig:
    depth: int        # d, rows / hash functions
    width: int        # w, columns per row
    master_seed: int  # seeds the per-row hash family

    def __post_init__(self) -> None:
        problems = []
        if self.depth < 1:
            problems.append(f"depth must be >= 1, got {self.depth}")
        if self.width < 1:
            problems.append(f"width must be >= 1, got {self.width}")
        if not 0 <= self.master_seed <= MASK64:
            problems.append(f"master_seed must fit in 64 unsigned bits, got {self.master_seed}")
        if problems:
            raise ConfigurationError("; ".join(problems))
