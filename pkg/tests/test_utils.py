"""Utility functions tests.

Tests for the progress bar and knot name ordering.
"""

import io

import pytest

from cosmic.utils import ProgressBar, natural_key


class TestNaturalKey:
    """Test knot name ordering."""

    def test_crossing_number_first(self):
        """Test 9_2 sorts before 10_1."""
        assert sorted(["10_1", "9_2", "3_1"], key=natural_key) == ["3_1", "9_2", "10_1"]

    def test_index_numeric(self):
        """Test 10_9 sorts before 10_10."""
        assert sorted(["10_10", "10_9"], key=natural_key) == ["10_9", "10_10"]

    def test_non_alternating_names(self):
        """Test names with letters keep their numeric parts ordered."""
        names = ["11n_34", "11a_2", "11n_4"]
        assert sorted(names, key=natural_key) == ["11a_2", "11n_4", "11n_34"]


class TestProgressBarBasic:
    """Test basic progress bar functionality."""

    def test_disabled_writes_nothing(self):
        """Test a disabled bar stays silent."""
        stream = io.StringIO()
        with ProgressBar(total=10, disable=True, stream=stream) as pbar:
            pbar.update(5)
        assert stream.getvalue() == ""
        assert pbar.n == 0

    def test_for_terminal_is_silent_off_tty(self, monkeypatch):
        """Test the terminal bar disables itself without a tty."""
        monkeypatch.setattr("sys.stderr", io.StringIO())
        assert ProgressBar.for_terminal(5, "Knots").disable
        assert ProgressBar.for_terminal(5, "Knots", enabled=False).disable

    def test_close_ends_line(self):
        """Test close draws the final state and a newline."""
        stream = io.StringIO()
        with ProgressBar(total=3, desc="Knots", ncols=80, stream=stream) as pbar:
            for _ in range(3):
                pbar.update()
        text = stream.getvalue()
        assert text.endswith("\n")
        assert "3/3" in text


class TestProgressBarRender:
    """Test the rendered bar text."""

    def test_known_total(self):
        """Test percentage and counts."""
        pbar = ProgressBar(total=4, desc="Knots", ncols=80)
        pbar.n = 2
        out = pbar.render()
        assert out.startswith("Knots:  50.0%|")
        assert "| 2/4 [" in out
        assert len(out) <= 80

    def test_unknown_total(self):
        """Test the indeterminate form."""
        pbar = ProgressBar(total=None, desc="Knots", ncols=80)
        pbar.n = 7
        assert pbar.render().startswith("Knots: 7 [")

    def test_truncated_to_width(self):
        """Test a narrow terminal truncates the line."""
        pbar = ProgressBar(total=None, desc="x" * 40, ncols=20)
        out = pbar.render()
        assert len(out) == 20
        assert out.endswith("...")

    @pytest.mark.parametrize(
        "seconds,expected",
        [(0, "00:00"), (65, "01:05"), (3725, "01:02:05"), (-1, "??:??"), (float("nan"), "??:??")],
    )
    def test_format_time(self, seconds, expected):
        """Test elapsed time formatting."""
        assert ProgressBar._format_time(seconds) == expected
