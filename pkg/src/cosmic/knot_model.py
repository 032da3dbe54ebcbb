"""Knot diagrams, slopes and the PD/DT text formats.

A diagram is a list of crossings in planar-diagram (PD) notation. Each
crossing ``X[i, j, k, l]`` lists the four edge labels meeting at it in
counterclockwise order, starting from the incoming under-strand, so the
under-strand runs from slot 0 to slot 2. The over-strand runs either from
slot 3 to slot 1 (a positive crossing) or from slot 1 to slot 3 (a negative
crossing); which one is read off the traversal of the knot.

PD grammar accepted by :func:`parse_pd`::

    pd       = [ "PD" ] "[" [ crossing { "," crossing } ] "]"
    crossing = [ "X" ] ( "[" | "(" ) int "," int "," int "," int ( "]" | ")" )

Whitespace is free and the outer brackets may be omitted.
"""

from __future__ import annotations

import itertools
import logging
import math
import re
from collections.abc import Sequence
from dataclasses import dataclass, field
from enum import StrEnum
from fractions import Fraction

from .errors import InvalidSlope, ParseError, ValidationError

logger = logging.getLogger(__name__)

Crossing = tuple[int, int, int, int]

_CROSSING_RE = re.compile(
    r"X?\s*[\[(]\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*[\])]"
)
_LEFTOVER_RE = re.compile(r"[\s,\[\]()]*")
_DT_RE = re.compile(r"^\s*(?:DT\s*)?[\[(]?(?P<body>[-\d\s,]*)[\])]?\s*$")


def _occurrences(crossings: Sequence[Crossing]) -> dict[int, list[tuple[int, int]]]:
    where: dict[int, list[tuple[int, int]]] = {}
    for c, x in enumerate(crossings):
        for s, label in enumerate(x):
            where.setdefault(label, []).append((c, s))
    return where


def _other_end(
    where: dict[int, list[tuple[int, int]]], label: int, pos: tuple[int, int]
) -> tuple[int, int]:
    first, second = where[label]
    return second if first == pos else first


def component_count(crossings: Sequence[Crossing]) -> int:
    """Number of link components traced by a PD crossing list.

    Strands pass straight through a crossing, so slot ``p`` joins slot ``p+2``.
    Free loops without crossings are not represented and not counted.
    """
    parent: dict[int, int] = {}

    def find(a: int) -> int:
        while parent.setdefault(a, a) != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for x in crossings:
        for p in (0, 1):
            ra, rb = find(x[p]), find(x[p + 2])
            if ra != rb:
                parent[ra] = rb
    return len({find(label) for x in crossings for label in x})


def faces(crossings: Sequence[Crossing]) -> list[list[tuple[int, int]]]:
    """Trace the faces of the planar embedding given by the crossing list.

    A corner ``(c, p)`` is the region between slots ``p`` and ``p+1`` of
    crossing ``c``. It lies on the left of edge ``x[p]`` when travelling away
    from the crossing, and continues at the far end of edge ``x[p+1]``.

    Returns:
        Faces as lists of corners, in order of discovery.
    """
    where = _occurrences(crossings)
    seen: set[tuple[int, int]] = set()
    out = []
    for c in range(len(crossings)):
        for p in range(4):
            if (c, p) in seen:
                continue
            face = []
            corner = (c, p)
            while corner not in seen:
                seen.add(corner)
                face.append(corner)
                x, q = corner
                label = crossings[x][(q + 1) % 4]
                corner = _other_end(where, label, (x, (q + 1) % 4))
            out.append(face)
    return out


def is_planar(crossings: Sequence[Crossing]) -> bool:
    """True when the crossing list describes a connected diagram on the sphere."""
    n = len(crossings)
    return n == 0 or len(faces(crossings)) == n + 2


def compact_labels(crossings: Sequence[Sequence[int]]) -> tuple[Crossing, ...]:
    """Relabel edges to ``1..k`` preserving their relative order."""
    order = {label: i for i, label in enumerate(sorted({v for x in crossings for v in x}), 1)}
    return tuple(tuple(order[v] for v in x) for x in crossings)


def _trace(crossings: tuple[Crossing, ...]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Walk the knot from the outgoing under-strand of crossing 0.

    Returns:
        The over-strand entry slot of each crossing and the edge labels in
        traversal order.
    """
    n = len(crossings)
    if n == 0:
        return (), ()
    where = _occurrences(crossings)
    over_in = [None] * n
    under_seen = [False] * n
    path = []
    start = (0, 2)
    pos = start
    for _ in range(2 * n):
        c, s = pos
        label = crossings[c][s]
        path.append(label)
        c2, s2 = _other_end(where, label, pos)
        if s2 == 2:
            raise ValidationError(
                f"inconsistent orientation: edge {label} enters crossing {c2 + 1} "
                "on its outgoing under-strand"
            )
        if s2 == 0:
            if under_seen[c2]:
                raise ValidationError(f"crossing {c2 + 1} is passed under twice")
            under_seen[c2] = True
        else:
            if over_in[c2] is not None:
                raise ValidationError(f"crossing {c2 + 1} is passed over twice")
            over_in[c2] = s2
        pos = (c2, (s2 + 2) % 4)
        if pos == start:
            break
    if pos != start or len(path) != 2 * n:
        raise ValidationError("diagram does not close up into a single strand")
    return tuple(over_in), tuple(path)


@dataclass(frozen=True)
class KnotDiagram:
    """Validated, oriented single-component knot diagram in PD notation.

    Attributes:
        crossings: PD tuples with edge labels ``1..2n``.
        over_in: For each crossing, the slot (1 or 3) where the over-strand enters.
        path: Edge labels in traversal order, starting from the outgoing
            under-strand of the first crossing.
    """

    crossings: tuple[Crossing, ...]
    over_in: tuple[int, ...] = field(init=False, repr=False, compare=False)
    path: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        crossings = tuple(tuple(int(v) for v in x) for x in self.crossings)
        for i, x in enumerate(crossings):
            if len(x) != 4:
                raise ValidationError(f"crossing {i + 1} has {len(x)} labels, expected 4")
        counts: dict[int, int] = {}
        for x in crossings:
            for label in x:
                counts[label] = counts.get(label, 0) + 1
        for label, count in sorted(counts.items()):
            if count != 2:
                raise ValidationError(f"arc label {label} appears {count} times")
        if component_count(crossings) > 1:
            raise ValidationError(
                f"diagram has {component_count(crossings)} components, expected a knot"
            )
        if not is_planar(crossings):
            raise ValidationError("crossing list is not a planar diagram")
        object.__setattr__(self, "crossings", crossings)
        over_in, path = _trace(crossings)
        object.__setattr__(self, "over_in", over_in)
        object.__setattr__(self, "path", path)

    @classmethod
    def unknot(cls) -> KnotDiagram:
        return cls(())

    @property
    def n_crossings(self) -> int:
        return len(self.crossings)

    def signs(self) -> tuple[int, ...]:
        """Sign of every crossing (+1 when the over-strand enters at slot 3)."""
        return tuple(1 if s == 3 else -1 for s in self.over_in)

    def __str__(self) -> str:
        return serialize_pd(self)


def parse_pd(text: str) -> KnotDiagram:
    """Parse PD text into a validated knot diagram.

    Args:
        text: A PD code such as ``"PD[X[1,4,2,5], X[3,6,4,1], X[5,2,6,3]]"``.
            Parentheses work as crossing brackets and ``X`` is optional.

    Returns:
        The diagram with edge labels compacted to ``1..2n``.

    Raises:
        ParseError: If the text is not in the PD grammar.
        ValidationError: If a label is not used exactly twice, the code
            describes more than one component, or it is not planar.
    """
    body = text.strip()
    if body.upper().startswith("PD"):
        body = body[2:]
    groups = _CROSSING_RE.findall(body)
    leftover = _CROSSING_RE.sub("", body)
    if not _LEFTOVER_RE.fullmatch(leftover):
        raise ParseError(f"Unable to parse PD code: {text!r}")
    crossings = [tuple(int(v) for v in g) for g in groups]
    return KnotDiagram(compact_labels(crossings))


def serialize_pd(d: KnotDiagram) -> str:
    """Render a diagram in the ``PD[X[...], ...]`` form read by :func:`parse_pd`."""
    inner = ", ".join("X[" + ",".join(str(v) for v in x) + "]" for x in d.crossings)
    return f"PD[{inner}]"


def parse_dt(text: str) -> KnotDiagram:
    """Convert a Dowker-Thistlethwaite code into a PD diagram.

    The code lists the even partner of the odd passages 1, 3, ..., 2n-1. A
    positive entry means the even passage goes under. The planar embedding is
    found by trying both crossing rotations at every crossing but the first
    and keeping the first choice whose face count is ``n + 2``. The first
    crossing is fixed, so the chirality of a knot given by an all-positive
    code is the one that choice produces; callers that care must record it.

    Raises:
        ParseError: If the text is not a list of integers.
        ValidationError: If the entries are not a permutation of the even
            passages or no planar embedding exists.
    """
    match = _DT_RE.match(text)
    if match is None:
        raise ParseError(f"Unable to parse DT code: {text!r}")
    tokens = [t for t in re.split(r"[\s,]+", match["body"].strip()) if t]
    try:
        code = [int(t) for t in tokens]
    except ValueError:
        raise ParseError(f"Unable to parse DT code: {text!r}") from None
    n = len(code)
    if sorted(abs(e) for e in code) != list(range(2, 2 * n + 1, 2)):
        raise ValidationError(f"DT entries must be the even numbers 2..{2 * n}: {code}")
    if n == 0:
        return KnotDiagram.unknot()

    def edge_into(passage: int) -> int:
        return passage - 1 if passage > 1 else 2 * n

    strands = []
    for i, even in enumerate(code, start=1):
        odd = 2 * i - 1
        under, over = (abs(even), odd) if even > 0 else (odd, abs(even))
        strands.append((edge_into(under), under, edge_into(over), over))

    for choice in itertools.product((1, -1), repeat=n - 1):
        crossings = []
        for (u_in, u_out, o_in, o_out), sign in zip(strands, (1,) + choice):
            if sign > 0:
                crossings.append((u_in, o_out, u_out, o_in))
            else:
                crossings.append((u_in, o_in, u_out, o_out))
        if is_planar(crossings):
            logger.debug("DT %s realized with rotation choice %s", code, choice)
            return KnotDiagram(tuple(crossings))
    raise ValidationError(f"DT code {code} has no planar realization")


def parse_code(text: str) -> KnotDiagram:
    """Parse either a ``DT[...]`` or a PD code."""
    if text.strip().upper().startswith("DT"):
        return parse_dt(text)
    return parse_pd(text)


def writhe(d: KnotDiagram) -> int:
    """Sum of the crossing signs."""
    return sum(d.signs())


def crossing_signs(d: KnotDiagram) -> tuple[int, ...]:
    return d.signs()


def mirror(d: KnotDiagram) -> KnotDiagram:
    """Switch every crossing, rotating each tuple so slot 0 stays the under entry."""
    out = []
    for x, s in zip(d.crossings, d.over_in):
        i, j, k, l = x
        # the old over-strand becomes the new under-strand
        out.append((l, i, j, k) if s == 3 else (j, k, l, i))
    return KnotDiagram(tuple(out))


@dataclass(frozen=True, order=True)
class Slope:
    """A non-meridional, non-longitudinal surgery slope ``m/n`` with ``m > 0``."""

    m: int
    n: int

    def __post_init__(self):
        if self.m <= 0 or self.n == 0 or math.gcd(self.m, self.n) != 1:
            raise InvalidSlope(f"slope {self.m}/{self.n} is not normalized")

    @classmethod
    def parse(cls, text: str) -> Slope:
        head, sep, tail = text.strip().partition("/")
        try:
            m, n = int(head), int(tail) if sep else 1
        except ValueError:
            raise ParseError(f"Unable to parse slope: {text!r}") from None
        return normalize_slope(m, n)

    @property
    def value(self) -> Fraction:
        return Fraction(self.m, self.n)

    def negated(self) -> Slope:
        """The slope ``-m/n``."""
        return Slope(self.m, -self.n)

    def __str__(self) -> str:
        return f"{self.m}/{self.n}"


def normalize_slope(m: int, n: int) -> Slope:
    """Reduce ``m/n`` and make the numerator positive.

    Raises:
        InvalidSlope: For ``m == 0`` (longitudinal) or ``n == 0`` (meridional).
    """
    if m == 0:
        raise InvalidSlope(f"longitudinal slope {m}/{n} is excluded")
    if n == 0:
        raise InvalidSlope(f"meridional slope {m}/{n} is excluded")
    g = math.gcd(m, n)
    m, n = m // g, n // g
    if m < 0:
        m, n = -m, -n
    return Slope(m, n)


class SurgeryType(StrEnum):
    ZERO = "zero_type"
    PLUS = "plus_type"
    MINUS = "minus_type"


@dataclass(frozen=True)
class SlopePair:
    first: Slope
    second: Slope
    type_tag: SurgeryType


def classify_slope_pair(first: Slope, second: Slope) -> SlopePair:
    """Tag a pair of slopes with its surgery type."""
    a, b = first.value, second.value
    if a + b == 0:
        tag = SurgeryType.ZERO
    elif a * b > 0:
        tag = SurgeryType.PLUS
    else:
        tag = SurgeryType.MINUS
    return SlopePair(first, second, tag)
