import logging
import os
from dataclasses import dataclass
from pathlib import Path

from dotenv import load_dotenv

from ..errors import ConfigurationError

# Resolve .env relative to this file so it's found regardless of CWD
_ENV_FILE = Path(__file__).resolve().parent.parent.parent.parent / ".env"
load_dotenv(_ENV_FILE)

_MIN_BENCH_REPETITIONS = 5


@dataclass(frozen=True)
class Settings:
    out_dir: Path = Path("results")
    log_level: str = "INFO"
    workers: int = 1
    bench_repetitions: int = _MIN_BENCH_REPETITIONS


def _int_var(name: str, default: int, minimum: int, problems: list[str]) -> int:
    raw = os.getenv(name)
    if not raw:
        return default
    try:
        value = int(raw)
    except ValueError:
        problems.append(f"{name}={raw!r} is not an integer")
        return default
    if value < minimum:
        problems.append(f"{name}={value} must be >= {minimum}")
    return value


def load_settings() -> Settings:
    problems: list[str] = []

    log_level = os.getenv("FLOWSKETCH_LOG_LEVEL", "INFO").upper()
    if not isinstance(logging.getLevelName(log_level), int):
        problems.append(f"FLOWSKETCH_LOG_LEVEL={log_level!r} is not a logging level")

    workers = _int_var("FLOWSKETCH_WORKERS", 1, 1, problems)
    repetitions = _int_var(
        "FLOWSKETCH_BENCH_REPETITIONS", _MIN_BENCH_REPETITIONS, _MIN_BENCH_REPETITIONS, problems
    )
    if problems:
        raise ConfigurationError(f"Invalid environment variables: {problems}")

    return Settings(
        out_dir=Path(os.getenv("FLOWSKETCH_OUT_DIR") or "results"),
        log_level=log_level,
        workers=workers,
        bench_repetitions=repetitions,
    )
