"""Count-Min Sketch over 64-bit flow IDs.

A d×w matrix of 64-bit unsigned counters. Row i hashes a flow ID to one of w
columns with its own seed; an update adds the count to one cell per row, a
point query returns the minimum of the d cells the flow hashes to. The answer
never underestimates, and overestimates by more than ε·items_ingested with
probability at most δ, where ε = e/w and δ = e^-d.

Instances are single-writer. Shard ingestion across workers with one sketch
each and combine them with `merge`, which is exact.
"""

from collections.abc import Iterable, Sequence

import numpy as np

from ..errors import ConfigMismatchError, ConfigurationError, CounterOverflowError, DomainError
from ..models.sketch_config import SketchConfig
from .hashing import MASK64, column, columns_array, row_seeds


class Sketch:
    def __init__(self, config: SketchConfig) -> None:
        self._config = config
        self._seeds = row_seeds(config.master_seed, config.depth)
        self._counters = np.zeros((config.depth, config.width), dtype=np.uint64)
        self._items = 0

    @classmethod
    def from_state(cls, config: SketchConfig, counters: np.ndarray, items_ingested: int) -> "Sketch":
        """Restores a sketch from a counter matrix, checking it is consistent."""
        counters = np.asarray(counters, dtype=np.uint64)
        if counters.shape != (config.depth, config.width):
            raise ConfigurationError(
                f"counter matrix is {counters.shape}, config needs {(config.depth, config.width)}"
            )
        if not 0 <= items_ingested <= MASK64:
            raise ConfigurationError(f"items_ingested out of range: {items_ingested}")
        # Python ints so the row sums cannot wrap.
        for i, row in enumerate(counters.tolist()):
            if sum(row) != items_ingested:
                raise ConfigurationError(
                    f"row {i} sums to {sum(row)}, expected items_ingested={items_ingested}"
                )
        sketch = cls(config)
        sketch._counters = counters.copy()
        sketch._items = items_ingested
        return sketch

    @property
    def config(self) -> SketchConfig:
        return self._config

    @property
    def depth(self) -> int:
        return self._config.depth

    @property
    def width(self) -> int:
        return self._config.width

    @property
    def items_ingested(self) -> int:
        """L1 norm of all updates."""
        return self._items

    @property
    def counters(self) -> np.ndarray:
        """Read-only view of the d×w counter matrix."""
        view = self._counters.view()
        view.flags.writeable = False
        return view

    def row_hash(self, row: int, item: int) -> int:
        if not 0 <= row < self.depth:
            raise IndexError(f"row {row} outside [0, {self.depth})")
        return column(item, self._seeds[row], self.width)

    def columns(self, items: Iterable[int] | np.ndarray) -> np.ndarray:
        """d×n matrix of the column every item hashes to in every row."""
        items = np.atleast_1d(np.asarray(items, dtype=np.uint64))
        out = np.empty((self.depth, items.size), dtype=np.uint64)
        for i, seed in enumerate(self._seeds):
            out[i] = columns_array(items, seed, self.width)
        return out

    def _reserve(self, count: int) -> None:
        # Every counter is <= items_ingested, so guarding the total guards every cell.
        if count > MASK64 - self._items:
            raise CounterOverflowError(
                f"adding {count} to {self._items} ingested items overflows 64-bit counters"
            )

    def update(self, item: int, count: int = 1) -> None:
        self.update_at([column(item, seed, self.width) for seed in self._seeds], count)

    def update_at(self, cols: Sequence[int], count: int = 1) -> None:
        """Adds `count` at pre-computed columns, one per row (see `columns`)."""
        if count < 1:
            raise DomainError(f"count must be >= 1, got {count}")
        self._reserve(count)
        counters = self._counters
        for i, c in enumerate(cols):
            counters[i, c] += count
        self._items += count

    def ingest(self, items: Iterable[int] | np.ndarray, counts: Iterable[int] | np.ndarray | None = None) -> None:
        """Batch update; bit-identical to calling `update` for every item in order."""
        items = np.atleast_1d(np.asarray(items, dtype=np.uint64))
        if items.size == 0:
            return
        if counts is None:
            total = int(items.size)
            weights = None
        else:
            weights = np.atleast_1d(np.asarray(counts, dtype=np.uint64))
            if weights.shape != items.shape:
                raise DomainError(f"{weights.size} counts for {items.size} items")
            if (weights == 0).any():
                raise DomainError("every count must be >= 1")
            total = sum(weights.tolist())
        self._reserve(total)
        cols = self.columns(items)
        for i in range(self.depth):
            if weights is None:
                added = np.bincount(cols[i].astype(np.intp), minlength=self.width)
                self._counters[i] += added.astype(np.uint64)
            else:
                np.add.at(self._counters[i], cols[i].astype(np.intp), weights)
        self._items += total

    def ingest_with_estimates(self, items: Iterable[int] | np.ndarray) -> np.ndarray:
        """Unit-count batch update returning each item's estimate right after its own update.

        Same counters and estimates as `update` followed by `query` per item.
        A packet's running count in a cell is the cell's starting value plus
        its position among the batch's packets hitting that cell.
        """
        items = np.atleast_1d(np.asarray(items, dtype=np.uint64))
        n = int(items.size)
        if n == 0:
            return np.zeros(0, dtype=np.uint64)
        self._reserve(n)
        cols = self.columns(items).astype(np.intp)
        positions = np.arange(n)
        estimates: np.ndarray | None = None
        for i in range(self.depth):
            row_cols = cols[i]
            order = np.argsort(row_cols, kind="stable")
            sorted_cols = row_cols[order]
            starts = np.flatnonzero(np.r_[True, sorted_cols[1:] != sorted_cols[:-1]])
            group_start = np.repeat(starts, np.diff(np.r_[starts, n]))
            running = np.empty(n, dtype=np.uint64)
            running[order] = (positions - group_start + 1).astype(np.uint64)
            running += self._counters[i, row_cols]
            estimates = running if estimates is None else np.minimum(estimates, running)
            self._counters[i] += np.bincount(row_cols, minlength=self.width).astype(np.uint64)
        self._items += n
        return estimates

    def query(self, item: int) -> int:
        return self.query_at([column(item, seed, self.width) for seed in self._seeds])

    def query_at(self, cols: Sequence[int]) -> int:
        counters = self._counters
        return min(int(counters[i, c]) for i, c in enumerate(cols))

    def query_many(self, items: Iterable[int] | np.ndarray) -> np.ndarray:
        cols = self.columns(items)
        rows = np.arange(self.depth)[:, None]
        return self._counters[rows, cols.astype(np.intp)].min(axis=0)

    def merge(self, other: "Sketch") -> "Sketch":
        """Elementwise sum with a sketch of the same config, as a new sketch."""
        if other.config != self.config:
            raise ConfigMismatchError(f"cannot merge {self.config} with {other.config}")
        self._reserve(other._items)
        merged = Sketch(self.config)
        merged._counters = self._counters + other._counters
        merged._items = self._items + other._items
        return merged

    def reset(self) -> None:
        """Zeroes every counter; config and row seeds are kept."""
        self._counters.fill(0)
        self._items = 0

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Sketch):
            return NotImplemented
        return (
            self.config == other.config
            and self._items == other._items
            and np.array_equal(self._counters, other._counters)
        )

    __hash__ = None  # mutable

    def __repr__(self) -> str:
        return (
            f"Sketch(depth={self.depth}, width={self.width}, "
            f"master_seed={self._config.master_seed}, items_ingested={self._items})"
        )


def sketch_new(config: SketchConfig) -> Sketch:
    return Sketch(config)


def row_hash(sketch: Sketch, row: int, item: int) -> int:
    return sketch.row_hash(row, item)


def sketch_update(sketch: Sketch, item: int, count: int = 1) -> Sketch:
    sketch.update(item, count)
    return sketch


def sketch_query(sketch: Sketch, item: int) -> int:
    return sketch.query(item)


def sketch_merge(a: Sketch, b: Sketch) -> Sketch:
    return a.merge(b)


def sketch_reset(sketch: Sketch) -> Sketch:
    sketch.reset()
    return sketch
