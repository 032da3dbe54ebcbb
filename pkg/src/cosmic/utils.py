"""Small helpers shared by the pipeline and the CLI.

The ProgressBar class is a tqdm-like indicator for batch runs over a knot
table. It writes to stderr and adapts to the terminal width.

Example:
    >>> from cosmic.utils import ProgressBar
    >>> with ProgressBar(total=3, desc="Knots", disable=True) as pb:
    ...     for _ in range(3):
    ...         pb.update(1)
"""

from __future__ import annotations

import re
import shutil
import sys
import time

_KNOT_NAME_RE = re.compile(r"(\d+)")


def natural_key(name: str) -> tuple:
    """Sort key ordering ``"9_2"`` before ``"10_1"`` and ``"10_9"`` before ``"10_10"``."""
    return tuple(int(part) if part.isdigit() else part for part in _KNOT_NAME_RE.split(name))


class ProgressBar:
    """A simple progress bar for batch computations.

    Usage:
        with ProgressBar(total=len(rows), desc="Invariants") as pb:
            for row in rows:
                # do work
                pb.update(1)
    """

    def __init__(
        self,
        total: int | None = None,
        desc: str = "",
        disable: bool = False,
        ncols: int | None = None,
        mininterval: float = 0.1,
        stream=None,
    ):
        """Initialize progress bar.

        Args:
            total: Total number of iterations (None for indeterminate)
            desc: Description prefix for the progress bar
            disable: If True, disable the progress bar completely
            ncols: Width of the progress bar in characters (None for auto-detect)
            mininterval: Minimum time between updates in seconds
            stream: Output stream, stderr by default
        """
        self.total = total
        self.desc = desc
        self.disable = disable
        self.ncols = ncols
        self.mininterval = mininterval
        self.stream = stream if stream is not None else sys.stderr
        self.n = 0
        self.start_time = time.time()
        self.last_print_time = 0.0

    @classmethod
    def for_terminal(cls, total: int | None, desc: str = "", enabled: bool = True) -> ProgressBar:
        """A bar that stays silent unless stderr is a terminal."""
        return cls(total=total, desc=desc, disable=not (enabled and sys.stderr.isatty()))

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self.close()
        return False

    def update(self, n: int = 1):
        """Advance by ``n`` steps, redrawing at most every ``mininterval`` seconds."""
        if self.disable:
            return

        self.n += n
        current_time = time.time()

        if current_time - self.last_print_time < self.mininterval:
            if self.total is not None and self.n >= self.total:
                self._print_bar()
            return

        self.last_print_time = current_time
        self._print_bar()

    def _get_terminal_width(self) -> int:
        if self.ncols is not None:
            return self.ncols
        return shutil.get_terminal_size(fallback=(80, 24)).columns

    def render(self) -> str:
        """Current bar text, without the leading carriage return."""
        elapsed = time.time() - self.start_time
        rate = self.n / elapsed if elapsed > 0 else 0
        width = self._get_terminal_width()

        if self.total:
            percent = min(100, (self.n / self.total) * 100)
            eta = (self.total - self.n) / rate if rate > 0 else 0
            prefix = f"{self.desc}: {percent:>5.1f}%|"
            suffix = (
                f"| {self.n}/{self.total} "
                f"[{self._format_time(elapsed)}<{self._format_time(eta)}, {rate:.2f}it/s]"
            )
            bar_width = max(10, width - len(prefix) - len(suffix) - 1)
            filled = int(bar_width * min(self.n, self.total) / self.total)
            output = prefix + "#" * filled + "-" * (bar_width - filled) + suffix
        else:
            output = f"{self.desc}: {self.n} [{self._format_time(elapsed)}, {rate:.2f}it/s]"

        if len(output) > width:
            output = output[: width - 3] + "..."
        return output

    def _print_bar(self):
        if self.disable:
            return
        self.stream.write("\r" + self.render())
        self.stream.flush()

    @staticmethod
    def _format_time(seconds: float) -> str:
        """Format seconds as MM:SS or HH:MM:SS."""
        if seconds < 0 or seconds != seconds:
            return "??:??"

        seconds = int(seconds)
        if seconds < 3600:
            return f"{seconds // 60:02d}:{seconds % 60:02d}"
        hours, rest = divmod(seconds, 3600)
        return f"{hours:02d}:{rest // 60:02d}:{rest % 60:02d}"

    def close(self):
        """Draw the final state and end the line."""
        if self.disable:
            return
        self._print_bar()
        self.stream.write("\n")
        self.stream.flush()
