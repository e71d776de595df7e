"""Experiment configuration: presets, key=value config files and flag overrides.

Config files are flat `key=value` lines; `#` starts a comment, `grid=` may
repeat (one `depth,width` cell per line) and `seeds=` takes `1,2,5-9`:

    preset=fig3
    flows=7000
    alpha=1.1
    packets=550000
    k=20
    seeds=1-20
    grid=3,64
    grid=5,256
    out=results/accuracy
"""

from collections.abc import Mapping
from pathlib import Path
from typing import Any

from pydantic import ValidationError

from ..errors import ConfigurationError, FormatError
from ..models.experiment import ExperimentConfig

PRESETS: dict[str, dict[str, Any]] = {
    # Top-20 accuracy over d in {3,5,7} at w=64 and at w=256, on the 7,000-flow scenario.
    "fig3": {
        "n_flows": 7_000,
        "alpha": 1.1,
        "total_packets": 550_000,
        "k": 20,
        "grid": ((3, 64), (5, 64), (7, 64), (3, 256), (5, 256), (7, 256)),
    },
}
PRESETS["accuracy-study"] = PRESETS["fig3"]

# config-file key -> ExperimentConfig field
_KEYS = {
    "flows": "n_flows",
    "n": "n_flows",
    "alpha": "alpha",
    "packets": "total_packets",
    "k": "k",
    "seeds": "seeds",
    "seed": "seeds",
    "grid": "grid",
    "out": "out_dir",
    "workers": "workers",
    "snapshots": "snapshots",
}


def parse_seeds(text: str) -> tuple[int, ...]:
    """`1,2,5-9` -> (1, 2, 5, 6, 7, 8, 9)."""
    seeds: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            if "-" in part:
                lo, hi = (int(x) for x in part.split("-", 1))
                if hi < lo:
                    raise ConfigurationError(f"empty seed range {part!r}")
                seeds.extend(range(lo, hi + 1))
            else:
                seeds.append(int(part))
        except ValueError as exc:
            raise ConfigurationError(f"bad seed list entry {part!r}") from exc
    return tuple(seeds)


def parse_grid_cell(text: str) -> tuple[int, int]:
    """`5,272` or `5x272` -> (5, 272)."""
    parts = text.replace("x", ",").split(",")
    try:
        depth, width = (int(p) for p in parts)
    except ValueError as exc:
        raise ConfigurationError(f"grid cell must be 'depth,width', got {text!r}") from exc
    return depth, width


def preset(name: str) -> dict[str, Any]:
    try:
        return dict(PRESETS[name])
    except KeyError:
        raise ConfigurationError(f"unknown preset {name!r}; known: {sorted(PRESETS)}") from None


def parse_config_text(text: str, source: str = "<config>") -> dict[str, Any]:
    values: dict[str, Any] = {}
    grid: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip().lower(), value.strip()
        if not sep:
            raise FormatError(f"{source}:{lineno}: expected key=value, got {raw!r}")
        if key == "preset":
            values = {**preset(value), **values}
            continue
        field = _KEYS.get(key)
        if field is None:
            raise FormatError(f"{source}:{lineno}: unknown key {key!r}")
        if field == "grid":
            grid.append(parse_grid_cell(value))
        elif field == "seeds":
            values["seeds"] = parse_seeds(value)
        elif field == "snapshots":
            values["snapshots"] = value.lower() in ("1", "true", "yes", "on")
        else:
            values[field] = value
    if grid:
        values["grid"] = tuple(grid)
    return values


def load_config_file(path: Path) -> dict[str, Any]:
    return parse_config_text(Path(path).read_text(encoding="utf-8"), source=str(path))


def build_experiment_config(*layers: Mapping[str, Any]) -> ExperimentConfig:
    """Validates the merged layers; later layers win, None values are skipped."""
    merged: dict[str, Any] = {}
    for layer in layers:
        merged.update({k: v for k, v in layer.items() if v is not None})
    merged.setdefault("grid", ())
    merged.setdefault("seeds", ())
    try:
        return ExperimentConfig(**merged)
    except ValidationError as exc:
        problems = [f"{'.'.join(map(str, e['loc']))}: {e['msg']}" for e in exc.errors()]
        raise ConfigurationError(f"invalid experiment config: {problems}") from exc
