"""Batch runs over a knot table: ingestion, caching, classification, reports.

A knot table is a CSV file with the header::

    name,pd_code,crossings,alternating,quasi_alternating,amphicheiral,torus_p,torus_q,genus,signature,nu,nu_mirror

The pd_code column holds a PD code or a ``DT[...]`` code. Empty cells mean
unknown. Flags accept ``1/0``, ``true/false``, ``yes/no`` and ``Y/N``.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import logging
import os
import tempfile
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .classifier import Status, Verdict, classify, zero_type_ruled_out
from .config import Config
from .errors import CosmicError, ParseError, ResourceLimit, ValidationError
from .finite_type import INFINITY, InvariantRecord, KnotPolynomials, build_record
from .floer import RankProfile
from .knot_model import KnotDiagram, normalize_slope, parse_code, serialize_pd, writhe
from .quantum import ZeroTypeVerdict, zero_type_obstruction
from .seifert import alexander_conway, determinant, seifert_matrix, signature
from .skein import SkeinCache, jones, kauffman_polynomial
from .utils import ProgressBar, natural_key

logger = logging.getLogger(__name__)

COLUMNS = (
    "name",
    "pd_code",
    "crossings",
    "alternating",
    "quasi_alternating",
    "amphicheiral",
    "torus_p",
    "torus_q",
    "genus",
    "signature",
    "nu",
    "nu_mirror",
)
REQUIRED_COLUMNS = ("name", "pd_code", "crossings")

_TRUE = {"1", "true", "yes", "y", "t"}
_FALSE = {"0", "false", "no", "n", "f"}

TABLE1_ROWS = (
    ("target", "Target"),
    ("v3_nonzero", "v3!=0 Total"),
    ("i-c", "(i-c)"),
    ("alternating", "Alternating"),
    ("i-b", "(i-b)"),
    ("i-b_exclusive", "(i-b) without (i-c)"),
    ("v3_zero", "v3=0 Total"),
    ("iii", "(iii)"),
)


@dataclass(frozen=True)
class KnotTableRow:
    """One knot of a table, with whatever classical and Floer data is known."""

    name: str
    pd_code: str
    crossing_number: int
    alternating: bool = False
    quasi_alternating: bool | None = None
    amphicheiral: bool = False
    torus: tuple[int, int] | None = None
    genus: int | None = None
    signature: int | None = None
    nu: int | None = None
    nu_mirror: int | None = None
    line: int = 0

    def diagram(self) -> KnotDiagram:
        return parse_code(self.pd_code)

    @property
    def bucket(self) -> str:
        return crossing_bucket(self.crossing_number)


@dataclass(frozen=True)
class RowError:
    line: int
    name: str
    message: str


def crossing_bucket(crossings: int) -> str:
    return "<=8" if crossings <= 8 else str(crossings)


def _bucket_key(bucket: str) -> int:
    return 8 if bucket == "<=8" else int(bucket)


def _flag(raw: str, column: str) -> bool | None:
    value = raw.strip().lower()
    if not value:
        return None
    if value in _TRUE:
        return True
    if value in _FALSE:
        return False
    raise ParseError(f"column {column}: expected a flag, got {raw!r}")


def _int(raw: str, column: str) -> int | None:
    value = raw.strip()
    if not value:
        return None
    try:
        return int(value)
    except ValueError:
        raise ParseError(f"column {column}: expected an integer, got {raw!r}") from None


def _parse_row(record: dict[str, str], line: int) -> KnotTableRow:
    get = lambda key: record.get(key) or ""  # noqa: E731
    name = get("name").strip()
    if not name:
        raise ParseError("empty knot name")
    crossings = _int(get("crossings"), "crossings")
    if crossings is None:
        raise ParseError("missing crossing number")
    torus_p, torus_q = _int(get("torus_p"), "torus_p"), _int(get("torus_q"), "torus_q")
    if (torus_p is None) != (torus_q is None):
        raise ParseError("torus_p and torus_q must be given together")
    pd_code = get("pd_code").strip()
    diagram = parse_code(pd_code)
    if diagram.n_crossings != crossings:
        raise ValidationError(
            f"diagram has {diagram.n_crossings} crossings, table says {crossings}"
        )
    return KnotTableRow(
        name=name,
        pd_code=pd_code,
        crossing_number=crossings,
        alternating=bool(_flag(get("alternating"), "alternating")),
        quasi_alternating=_flag(get("quasi_alternating"), "quasi_alternating"),
        amphicheiral=bool(_flag(get("amphicheiral"), "amphicheiral")),
        torus=None if torus_p is None else (torus_p, torus_q),
        genus=_int(get("genus"), "genus"),
        signature=_int(get("signature"), "signature"),
        nu=_int(get("nu"), "nu"),
        nu_mirror=_int(get("nu_mirror"), "nu_mirror"),
        line=line,
    )


def ingest_with_errors(path: str | Path) -> tuple[list[KnotTableRow], list[RowError]]:
    """Read a knot table, collecting per-row problems instead of stopping.

    Returns:
        The valid rows in file order and one :class:`RowError` per rejected row.

    Raises:
        ParseError: If a required column is missing from the header.
        ValidationError: If two rows share a name.
    """
    rows: list[KnotTableRow] = []
    errors: list[RowError] = []
    seen: dict[str, int] = {}
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.DictReader(f)
        header = reader.fieldnames or []
        missing = [c for c in REQUIRED_COLUMNS if c not in header]
        if header and missing:
            raise ParseError(f"{path}: missing columns {', '.join(missing)}")
        for record in reader:
            line = reader.line_num
            name = (record.get("name") or "").strip()
            if name in seen:
                raise ValidationError(
                    f"{path}: duplicate knot {name!r} on lines {seen[name]} and {line}"
                )
            seen[name] = line
            try:
                rows.append(_parse_row(record, line))
            except (CosmicError, ValueError) as exc:
                errors.append(RowError(line, name, str(exc)))
                logger.warning("%s:%d: %s: %s", path, line, name or "?", exc)
    return rows, errors


def ingest(path: str | Path) -> list[KnotTableRow]:
    """Valid rows of a knot table; rejected rows are logged and skipped."""
    rows, _ = ingest_with_errors(path)
    return rows


def default_table_path() -> Path:
    """The knot table shipped with the package."""
    return Path(str(resources.files("cosmic") / "data" / "knots.csv"))


def lookup_knot(name: str, table: str | Path | None = None) -> KnotTableRow:
    """Find a knot by name in a table, the shipped one by default.

    Raises:
        KeyError: If no row has that name.
    """
    for row in ingest(table or default_table_path()):
        if row.name == name:
            return row
    raise KeyError(f"unknown knot {name!r}")


class InvariantCache:
    """Content-addressed on-disk store of computed invariants.

    Entries are JSON files named by the SHA-256 of the package version, the
    invariant name and the canonical PD code. A release therefore starts
    from an empty cache. Writes go through a temporary
    file and ``os.replace``, so readers never see a partial entry.
    """

    def __init__(self, directory: str | Path):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        self.hits = 0
        self.misses = 0

    @staticmethod
    def key(pd_text: str, invariant: str) -> str:
        from . import __version__

        payload = "\0".join((__version__, invariant, pd_text))
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()

    def _path(self, key: str) -> Path:
        return self.directory / key[:2] / f"{key}.json"

    def get(self, pd_text: str, invariant: str) -> dict | None:
        path = self._path(self.key(pd_text, invariant))
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except FileNotFoundError:
            self.misses += 1
            return None
        except json.JSONDecodeError:
            logger.warning("ignoring corrupt cache entry %s", path)
            self.misses += 1
            return None
        self.hits += 1
        return data

    def put(self, pd_text: str, invariant: str, value: dict) -> None:
        path = self._path(self.key(pd_text, invariant))
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as f:
                json.dump(value, f, sort_keys=True)
            os.replace(tmp, path)
        except BaseException:
            Path(tmp).unlink(missing_ok=True)
            raise


def compute_polynomials(d: KnotDiagram, config: Config | None = None) -> KnotPolynomials:
    """Every polynomial invariant of a diagram, computed from scratch."""
    config = config or Config()
    v = seifert_matrix(d, max_crossings=config.max_crossings)
    alexander, conway = alexander_conway(v)
    return KnotPolynomials(
        jones=jones(d, max_crossings=config.max_crossings),
        alexander=alexander,
        conway=conway,
        kauffman=kauffman_polynomial(
            d,
            SkeinCache(),
            max_crossings=config.max_crossings,
            max_skein_nodes=config.max_skein_nodes,
        ),
        determinant=determinant(v),
        signature=signature(v),
        writhe=writhe(d),
    )


def cached_polynomials(
    d: KnotDiagram,
    config: Config | None = None,
    cache: InvariantCache | None = None,
) -> KnotPolynomials:
    """:func:`compute_polynomials` through the on-disk cache, when one is configured.

    Pass ``cache`` to share one store, and its hit counters, across calls.
    """
    config = config or Config()
    if cache is None:
        if config.cache_dir is None:
            return compute_polynomials(d, config)
        cache = InvariantCache(config.cache_dir)
    pd_text = serialize_pd(d)
    hit = cache.get(pd_text, "polynomials")
    if hit is not None:
        return KnotPolynomials.from_json(hit)
    polys = compute_polynomials(d, config)
    cache.put(pd_text, "polynomials", polys.to_json())
    return polys


def rank_profile(rec: InvariantRecord) -> RankProfile | None:
    """Floer profile of a record, or None when ``nu`` or the genus is unknown."""
    if rec.nu is None or rec.nu_mirror is None or rec.genus is None:
        return None
    try:
        return RankProfile.normalized(rec.nu, rec.nu_mirror, rec.C_K, rec.genus)
    except ValidationError as exc:
        logger.warning("%s: inconsistent Floer data: %s", rec.name, exc)
        return None


def so3_obstructed_slopes(polys: KnotPolynomials, config: Config) -> list[str]:
    """Tested slopes at which the r = 5 obstruction separates ``m/n`` from ``-m/n``."""
    out = []
    for m, n in config.so3_slopes:
        slope = normalize_slope(m, n)
        if zero_type_obstruction(5, polys.jones, slope) == ZeroTypeVerdict.OBSTRUCTED:
            out.append(str(slope))
    return out


@dataclass
class KnotOutcome:
    """Result of one table row; exactly one of ``verdict`` and ``error`` is set."""

    row: KnotTableRow
    record: InvariantRecord | None = None
    verdict: Verdict | None = None
    so3_slopes: list[str] = field(default_factory=list)
    error: str | None = None
    error_type: str | None = None
    cache_hit: bool | None = None

    @property
    def ok(self) -> bool:
        return self.error is None

    def to_dict(self) -> dict:
        out = {"name": self.row.name, "crossings": self.row.crossing_number}
        if not self.ok:
            out["error"] = {"type": self.error_type, "message": self.error}
            return out
        out["record"] = self.record.to_dict()
        out["verdict"] = self.verdict.to_dict()
        out["so3_obstructed_slopes"] = list(self.so3_slopes)
        return out


def analyze_row(
    row: KnotTableRow,
    config: Config | None = None,
    cache: InvariantCache | None = None,
) -> KnotOutcome:
    """Compute, record and classify one knot; failures are captured, not raised."""
    config = config or Config()
    if cache is None and config.cache_dir is not None:
        cache = InvariantCache(config.cache_dir)
    hits = cache.hits if cache is not None else 0
    try:
        d = row.diagram()
        if d.n_crossings > config.max_crossings:
            raise ResourceLimit(
                f"{d.n_crossings} crossings exceed max_crossings={config.max_crossings}"
            )
        polys = cached_polynomials(d, config, cache)
        rec = build_record(row, polys, config)
        slopes = so3_obstructed_slopes(polys, config)
        verdict = classify(
            rec,
            rank_profile(rec),
            so3_obstructed=bool(config.so3_slopes) and len(slopes) == len(config.so3_slopes),
        )
    except (CosmicError, ArithmeticError, ValueError, RecursionError) as exc:
        logger.warning("%s: %s: %s", row.name, type(exc).__name__, exc)
        return KnotOutcome(row, error=str(exc), error_type=type(exc).__name__)
    logger.debug("%s: %s %s", row.name, verdict.status, verdict.fired)
    cache_hit = cache.hits > hits if cache is not None else None
    return KnotOutcome(row, rec, verdict, slopes, cache_hit=cache_hit)


@dataclass
class Report:
    """Per-knot outcomes plus the aggregate tables derived from them.

    Attributes:
        outcomes: One entry per analyzed row, in input order.
        failures: Rejected rows and knots whose analysis failed.
        table1: Per crossing bucket, the counts of :data:`TABLE1_ROWS`.
        table2: Per crossing bucket, the knots no criterion settles.
        zero_type_exceptions: Non-amphicheiral knots where ``v3`` and ``v5``
            leave 0-type surgeries open.
        so3_adjunct: Knots with at least one slope separated by the SO(3)
            obstruction, with those slopes.
    """

    outcomes: list[KnotOutcome] = field(default_factory=list)
    failures: list[dict] = field(default_factory=list)
    table1: dict[str, dict[str, int]] = field(default_factory=dict)
    table2: dict[str, list[str]] = field(default_factory=dict)
    zero_type_exceptions: list[str] = field(default_factory=list)
    so3_adjunct: dict[str, list[str]] = field(default_factory=dict)

    @classmethod
    def build(cls, outcomes: list[KnotOutcome], row_errors=()) -> Report:
        failures = [
            {"name": e.name, "line": e.line, "type": "RowError", "message": e.message}
            for e in row_errors
        ]
        table1: dict[str, dict[str, int]] = {}
        table2: dict[str, list[str]] = {}
        zero_type: list[str] = []
        so3: dict[str, list[str]] = {}
        for outcome in outcomes:
            if not outcome.ok:
                failures.append(
                    {
                        "name": outcome.row.name,
                        "line": outcome.row.line,
                        "type": outcome.error_type,
                        "message": outcome.error,
                    }
                )
                continue
            rec, verdict = outcome.record, outcome.verdict
            if outcome.so3_slopes:
                so3[rec.name] = list(outcome.so3_slopes)
            if not rec.amphicheiral and not zero_type_ruled_out(rec):
                zero_type.append(rec.name)
            if verdict.status == Status.EXCLUDED_BY_FAMILY:
                continue
            bucket = outcome.row.bucket
            counts = table1.setdefault(bucket, {key: 0 for key, _ in TABLE1_ROWS})
            fired = set(verdict.fired)
            counts["target"] += 1
            if rec.v3 != 0:
                counts["v3_nonzero"] += 1
                counts["i-c"] += "i-c" in fired
                if rec.alternating:
                    counts["alternating"] += 1
                    counts["i-b"] += "i-b" in fired
                    counts["i-b_exclusive"] += "i-b" in fired and "i-c" not in fired
            else:
                counts["v3_zero"] += 1
                counts["iii"] += "iii" in fired
            if verdict.status == Status.UNDETECTED:
                table2.setdefault(bucket, []).append(rec.name)
        for names in table2.values():
            names.sort(key=natural_key)
        return cls(
            outcomes=list(outcomes),
            failures=failures,
            table1=table1,
            table2=table2,
            zero_type_exceptions=sorted(zero_type, key=natural_key),
            so3_adjunct=so3,
        )

    @property
    def buckets(self) -> list[str]:
        return sorted(set(self.table1) | set(self.table2), key=_bucket_key)

    def undetected(self) -> set[str]:
        return {name for names in self.table2.values() for name in names}

    def to_dict(self) -> dict:
        return {
            "knots": [o.to_dict() for o in self.outcomes],
            "failures": list(self.failures),
            "table1": self.table1,
            "table2": self.table2,
            "zero_type_exceptions": list(self.zero_type_exceptions),
            "so3_adjunct": self.so3_adjunct,
        }


def run_pipeline(
    rows: list[KnotTableRow],
    config: Config | None = None,
    *,
    row_errors=(),
    progress: bool = False,
) -> Report:
    """Analyze every row and aggregate the results.

    With ``config.workers > 1`` rows are spread over a process pool; results
    are put back in input order before aggregation, so the report does not
    depend on completion order.
    """
    config = config or Config()
    cache = InvariantCache(config.cache_dir) if config.cache_dir is not None else None
    outcomes: list[KnotOutcome | None] = [None] * len(rows)
    with ProgressBar.for_terminal(len(rows), "Knots", enabled=progress) as bar:
        if config.workers > 1 and len(rows) > 1:
            with ProcessPoolExecutor(max_workers=config.workers) as pool:
                futures = {
                    pool.submit(analyze_row, row, config, cache): i for i, row in enumerate(rows)
                }
                for future in as_completed(futures):
                    outcomes[futures[future]] = future.result()
                    bar.update()
        else:
            for i, row in enumerate(rows):
                outcomes[i] = analyze_row(row, config, cache)
                bar.update()
    report = Report.build(outcomes, row_errors)
    logger.info(
        "analyzed %d knots, %d failures, %d undetected",
        len(rows),
        len(report.failures),
        len(report.undetected()),
    )
    if cache is not None:
        # Workers count into their own copies, so tally from the outcomes.
        hits = sum(1 for o in outcomes if o.cache_hit)
        misses = sum(1 for o in outcomes if o.cache_hit is False)
        logger.info("invariant cache: %d hits, %d misses", hits, misses)
    return report


def _format_value(value) -> str:
    if value is None:
        return ""
    if value == INFINITY:
        return "inf"
    return str(value)


CSV_COLUMNS = (
    "name",
    "crossings",
    "status",
    "fired",
    "zero_type_ruled_out",
    "a2",
    "a4",
    "v3",
    "v5",
    "det",
    "d_alex",
    "O_K",
    "C_K",
    "error",
)


def _emit_csv(report: Report) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for o in report.outcomes:
        if not o.ok:
            writer.writerow([o.row.name, o.row.crossing_number] + [""] * 11 + [o.error])
            continue
        rec, verdict = o.record, o.verdict
        writer.writerow(
            [
                rec.name,
                o.row.crossing_number,
                str(verdict.status),
                ";".join(verdict.fired),
                int(verdict.zero_type_ruled_out),
            ]
            + [
                _format_value(getattr(rec, key))
                for key in ("a2", "a4", "v3", "v5", "det", "d_alex", "O_K", "C_K")
            ]
            + [""]
        )
    return buffer.getvalue()


def _emit_text(report: Report) -> str:
    buckets = report.buckets
    label_width = max(len(label) for _, label in TABLE1_ROWS)
    lines = ["Summary of computations", ""]
    lines.append(" " * label_width + "".join(f"{b:>8}" for b in buckets))
    for key, label in TABLE1_ROWS:
        cells = "".join(f"{report.table1.get(b, {}).get(key, 0):>8}" for b in buckets)
        lines.append(f"{label:<{label_width}}{cells}")
    lines += ["", "Exceptions"]
    for b in buckets:
        lines.append(f"{b:>5}: {', '.join(report.table2.get(b, []))}")
    lines += ["", f"0-type exceptions: {', '.join(report.zero_type_exceptions)}"]
    if report.failures:
        lines += ["", "Failures"]
        for failure in report.failures:
            lines.append(f"  {failure['name']} (line {failure['line']}): {failure['message']}")
    return "\n".join(lines) + "\n"


def emit(report: Report, format: str = "json") -> bytes:
    """Serialize a report deterministically.

    Args:
        report: Report to write.
        format: ``"json"`` (sorted keys, two-space indent), ``"csv"`` (one
            row per knot) or ``"text"`` (the two summary tables).
    """
    if format == "json":
        text = json.dumps(report.to_dict(), sort_keys=True, indent=2) + "\n"
    elif format == "csv":
        text = _emit_csv(report)
    elif format == "text":
        text = _emit_text(report)
    else:
        raise ValueError(f"unknown report format {format!r}")
    return text.encode("utf-8")
