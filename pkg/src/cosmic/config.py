"""Run configuration for cosmic.

Configuration comes from four layers, highest precedence first: command-line
flags, the ``COSMIC_CACHE_DIR`` environment variable, a plain-text config file
and the defaults below.

The config file format is one ``key = value`` pair per line. Blank lines and
anything after ``#`` are ignored::

    # resource caps
    max_crossings = 14
    max_skein_nodes = 500000
    degree_mode = breadth
    so3_slopes = 1, 2, 1/2, 7/2
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from .errors import ParseError

CACHE_DIR_ENV = "COSMIC_CACHE_DIR"

DEGREE_MODES = ("top", "breadth")

DEFAULT_SO3_SLOPES: tuple[tuple[int, int], ...] = (
    (1, 1),
    (2, 1),
    (3, 1),
    (1, 2),
    (3, 2),
    (5, 2),
    (7, 2),
    (5, 3),
)


def parse_slope_text(text: str) -> tuple[int, int]:
    """Parse ``"m/n"`` or ``"m"`` into an integer pair (not yet normalized).

    Raises:
        ParseError: If the text is not an integer or a ratio of integers.
    """
    head, sep, tail = text.strip().partition("/")
    try:
        m = int(head)
        n = int(tail) if sep else 1
    except ValueError:
        raise ParseError(f"Unable to parse slope: {text!r}") from None
    return m, n


@dataclass(frozen=True)
class Config:
    """Resource caps and switches shared by every stage of a run.

    Attributes:
        max_crossings: Largest diagram accepted by the polynomial engines.
        max_skein_nodes: Recursion budget of the Kauffman skein engine.
        degree_mode: ``"top"`` or ``"breadth"``; how d(K) is read off the
            Alexander polynomial.
        series_order: Truncation order of the k_{n,N} expansion.
        so3_slopes: Slopes tested by the SO(3) 0-type adjunct.
        workers: Process pool size for batch runs (1 runs in-process).
        cache_dir: Directory of the on-disk invariant cache, or None.
    """

    max_crossings: int = 16
    max_skein_nodes: int = 2_000_000
    degree_mode: str = "top"
    series_order: int = 5
    so3_slopes: tuple[tuple[int, int], ...] = field(default=DEFAULT_SO3_SLOPES)
    workers: int = 1
    cache_dir: Path | None = None

    def __post_init__(self):
        if self.degree_mode not in DEGREE_MODES:
            raise ValueError(
                f"degree_mode must be one of {DEGREE_MODES}, got {self.degree_mode!r}"
            )
        if self.max_crossings < 0 or self.max_skein_nodes <= 0:
            raise ValueError("resource caps must be positive")
        if self.series_order < 5:
            raise ValueError(f"series_order must be at least 5, got {self.series_order}")
        if self.workers < 1:
            raise ValueError(f"workers must be at least 1, got {self.workers}")

    def from_env(self, environ: dict[str, str] | None = None) -> Config:
        """Return a copy with environment overrides applied."""
        env = os.environ if environ is None else environ
        value = env.get(CACHE_DIR_ENV)
        if value:
            return replace(self, cache_dir=Path(value))
        return self

    def merged(self, **overrides) -> Config:
        """Return a copy with the non-None overrides applied."""
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})


def _convert(key: str, raw: str, lineno: int):
    try:
        if key in ("max_crossings", "max_skein_nodes", "series_order", "workers"):
            return int(raw)
        if key == "degree_mode":
            return raw.lower()
        if key == "cache_dir":
            return Path(raw) if raw else None
        if key == "so3_slopes":
            return tuple(parse_slope_text(part) for part in raw.split(",") if part.strip())
    except (ValueError, ParseError) as exc:
        raise ParseError(f"line {lineno}: bad value for {key}: {raw!r}") from exc
    raise ParseError(f"line {lineno}: unknown key {key!r}")


def load_config(path: str | Path, base: Config | None = None) -> Config:
    """Read a ``key = value`` config file on top of ``base``.

    Args:
        path: File to read.
        base: Starting configuration; defaults to ``Config()``.

    Returns:
        The merged configuration.

    Raises:
        ParseError: On a malformed line, a bad value or an unknown key; the
            message names the line number.
    """
    known = {f.name for f in fields(Config)}
    values = {}
    text = Path(path).read_text(encoding="utf-8")
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, raw = line.partition("=")
        key = key.strip()
        if not sep:
            raise ParseError(f"line {lineno}: expected key = value, got {line!r}")
        if key not in known:
            raise ParseError(f"line {lineno}: unknown key {key!r}")
        values[key] = _convert(key, raw.strip(), lineno)
    try:
        return replace(base or Config(), **values)
    except ValueError as exc:
        raise ParseError(f"{path}: {exc}") from exc
