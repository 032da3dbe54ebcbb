"""Seifert surfaces, Alexander and Conway polynomials.

Seifert's algorithm smooths every crossing along the orientation. Picture a
crossing with both strands pointing north: the smoothing leaves a west arc and
an east arc, and the four corners of the crossing are the N, S, W and E faces.
The Seifert matrix is read off the fundamental cycles of the Seifert graph
(circles joined through crossings), using how each cycle passes every
crossing and whether the two circles there sit side by side or nested.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass

import sympy

from .algebra import LaurentPoly, SymIntMatrix, matrix_signature
from .config import Config
from .errors import ResourceLimit, ValidationError
from .knot_model import KnotDiagram, faces

logger = logging.getLogger(__name__)

# corner index of the (E, N, W, S) faces, by crossing sign
_COMPASS = {1: {"E": 0, "N": 1, "W": 2, "S": 3}, -1: {"S": 0, "E": 1, "N": 2, "W": 3}}

# contribution of (role of x, role of y) at a crossing, as (if positive, if negative)
_TRAVERSALS = {
    ("WE", "WE"): (0, 1),
    ("WE", "EW"): (1, 0),
    ("EW", "WE"): (0, -1),
    ("EW", "EW"): (-1, 0),
}
_CONTRIBUTIONS = {
    "side": {
        ("pE", "WE"): (-1, -1),
        ("pE", "EW"): (1, 1),
        ("WE", "WE"): (-1, 0),
        ("WE", "EW"): (1, 0),
        ("EW", "WE"): (0, -1),
        ("EW", "EW"): (0, 1),
    },
    "east_inside": {
        ("pW", "WE"): (1, 1),
        ("pW", "EW"): (-1, -1),
        ("WE", "pW"): (1, 1),
        ("EW", "pW"): (-1, -1),
        ("pE", "WE"): (-1, -1),
        ("pE", "EW"): (1, 1),
        **_TRAVERSALS,
    },
    "west_inside": {
        ("WE", "pE"): (1, 1),
        ("EW", "pE"): (-1, -1),
        **_TRAVERSALS,
    },
}


@dataclass(frozen=True)
class SeifertCircle:
    """One circle of the oriented smoothing.

    Attributes:
        edges: Edge labels in the order the circle runs through them.
        crossings: Crossing at the head of each edge, in the same order.
        ccw: True when the circle runs counterclockwise.
    """

    edges: tuple[int, ...]
    crossings: tuple[int, ...]
    ccw: bool


@dataclass(frozen=True)
class SeifertMatrix:
    """Seifert matrix of the surface produced by Seifert's algorithm."""

    genus_bound: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.entries) != 2 * self.genus_bound:
            raise ValidationError(
                f"Seifert matrix of genus {self.genus_bound} must have size "
                f"{2 * self.genus_bound}, got {len(self.entries)}"
            )

    @property
    def size(self) -> int:
        return len(self.entries)

    def symmetrized(self) -> SymIntMatrix:
        """``V + V^T``."""
        n = self.size
        return SymIntMatrix.from_rows(
            [[self.entries[i][j] + self.entries[j][i] for j in range(n)] for i in range(n)]
        )


class _Smoothing:
    """Oriented-smoothing bookkeeping shared by the circle and matrix routines."""

    def __init__(self, d: KnotDiagram):
        self.d = d
        self.signs = d.signs()
        self.head: dict[int, tuple[int, int]] = {}
        self.tail: dict[int, tuple[int, int]] = {}
        for c, x in enumerate(d.crossings):
            for s in (0, d.over_in[c]):
                self.head[x[s]] = (c, s)
            for s in (2, (d.over_in[c] + 2) % 4):
                self.tail[x[s]] = (c, s)
        corner_faces = faces(d.crossings)
        self.face_of = {corner: i for i, face in enumerate(corner_faces) for corner in face}
        self.n_faces = len(corner_faces)

    def next_edge(self, label: int) -> int:
        c, s = self.head[label]
        x = self.d.crossings[c]
        return x[2] if s != 0 else x[(self.d.over_in[c] + 2) % 4]

    def west_arc_edge(self, c: int) -> int:
        """Incoming edge of the west arc (the other arc is the east one)."""
        x = self.d.crossings[c]
        return x[3] if self.signs[c] > 0 else x[0]

    def left_face(self, label: int) -> int:
        return self.face_of[self.tail[label]]

    def right_face(self, label: int) -> int:
        c, s = self.tail[label]
        return self.face_of[(c, (s - 1) % 4)]

    def corner_face(self, c: int, compass: str) -> int:
        return self.face_of[(c, _COMPASS[self.signs[c]][compass])]


def _circles(sm: _Smoothing) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    seen: set[int] = set()
    out = []
    for start in sorted(sm.head):
        if start in seen:
            continue
        edges, heads = [], []
        label = start
        while label not in seen:
            seen.add(label)
            edges.append(label)
            heads.append(sm.head[label][0])
            label = sm.next_edge(label)
        out.append((tuple(edges), tuple(heads)))
    return out


def _is_ccw(sm: _Smoothing, edges: tuple[int, ...], outer: int) -> bool:
    parent = list(range(sm.n_faces))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a: int, b: int) -> None:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    on_circle = set(edges)
    for label in sm.head:
        if label not in on_circle:
            union(sm.left_face(label), sm.right_face(label))
    for c in range(len(sm.d.crossings)):
        north = sm.corner_face(c, "N")
        union(north, sm.corner_face(c, "S"))
        if sm.west_arc_edge(c) not in on_circle:
            union(north, sm.corner_face(c, "W"))
        east_in = sm.d.crossings[c][0] if sm.signs[c] > 0 else sm.d.crossings[c][1]
        if east_in not in on_circle:
            union(north, sm.corner_face(c, "E"))
    return find(outer) != find(sm.left_face(edges[0]))


def seifert_circles(d: KnotDiagram) -> list[SeifertCircle]:
    """Seifert circles with their rotation.

    The unbounded face is taken to be the face on the left of the first edge
    of the knot's traversal.
    """
    if d.n_crossings == 0:
        return [SeifertCircle((), (), True)]
    sm = _Smoothing(d)
    outer = sm.left_face(d.path[0])
    return [
        SeifertCircle(edges, heads, _is_ccw(sm, edges, outer))
        for edges, heads in _circles(sm)
    ]


def _fundamental_cycles(
    west: list[int], east: list[int], n_circles: int
) -> list[list[tuple[int, int, int]]]:
    """Cycles of the Seifert graph as ``(crossing, from_circle, to_circle)`` steps."""
    adjacency: dict[int, list[tuple[int, int]]] = {i: [] for i in range(n_circles)}
    for c, (w, e) in enumerate(zip(west, east)):
        adjacency[w].append((c, e))
        adjacency[e].append((c, w))
    parent: dict[int, tuple[int, int] | None] = {0: None}
    depth = {0: 0}
    tree: set[int] = set()
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for c, v in adjacency[u]:
            if v not in parent:
                parent[v] = (u, c)
                depth[v] = depth[u] + 1
                tree.add(c)
                queue.append(v)
    cycles = []
    for c in range(len(west)):
        if c in tree:
            continue
        u, v = west[c], east[c]
        up, down = [], []
        a, b = v, u
        while depth[a] > depth[b]:
            p, x = parent[a]
            up.append((x, a, p))
            a = p
        while depth[b] > depth[a]:
            p, x = parent[b]
            down.append((x, p, b))
            b = p
        while a != b:
            pa, xa = parent[a]
            up.append((xa, a, pa))
            a = pa
            pb, xb = parent[b]
            down.append((xb, pb, b))
            b = pb
        cycles.append([(c, u, v)] + up + list(reversed(down)))
    return cycles


def seifert_matrix(d: KnotDiagram, *, max_crossings: int = Config.max_crossings) -> SeifertMatrix:
    """Seifert matrix of the canonical surface from Seifert's algorithm.

    Raises:
        ResourceLimit: If the diagram exceeds ``max_crossings``.
    """
    if d.n_crossings > max_crossings:
        raise ResourceLimit(f"diagram has {d.n_crossings} crossings, cap is {max_crossings}")
    if d.n_crossings == 0:
        return SeifertMatrix(0, ())
    sm = _Smoothing(d)
    circles = seifert_circles(d)
    circle_of_edge = {e: i for i, circle in enumerate(circles) for e in circle.edges}
    west = [circle_of_edge[sm.west_arc_edge(c)] for c in range(d.n_crossings)]
    east = [
        circle_of_edge[x[0] if sm.signs[c] > 0 else x[1]] for c, x in enumerate(d.crossings)
    ]
    configs = []
    for c in range(d.n_crossings):
        w_ccw, e_ccw = circles[west[c]].ccw, circles[east[c]].ccw
        if w_ccw and not e_ccw:
            configs.append("side")
        elif not w_ccw and not e_ccw:
            configs.append("east_inside")
        elif w_ccw and e_ccw:
            configs.append("west_inside")
        else:
            raise ValidationError(f"impossible circle rotation at crossing {c + 1}")

    roles = []
    for cycle in _fundamental_cycles(west, east, len(circles)):
        mine: dict[int, list[str]] = {}
        for x, frm, _ in cycle:
            mine.setdefault(x, []).append("WE" if west[x] == frm else "EW")
        for k, (entry, _, here) in enumerate(cycle):
            exit_ = cycle[(k + 1) % len(cycle)][0]
            order = circles[here].crossings
            i, j = order.index(entry), order.index(exit_)
            step = (i + 1) % len(order)
            while step != j:
                x = order[step]
                mine.setdefault(x, []).append("pW" if west[x] == here else "pE")
                step = (step + 1) % len(order)
        roles.append(mine)

    size = len(roles)
    entries = [[0] * size for _ in range(size)]
    for a in range(size):
        for b in range(size):
            total = 0
            for c, ra in roles[a].items():
                rb = roles[b].get(c)
                if not rb:
                    continue
                table = _CONTRIBUTIONS[configs[c]]
                pick = 0 if sm.signs[c] > 0 else 1
                for r1 in ra:
                    for r2 in rb:
                        total += table.get((r1, r2), (0, 0))[pick]
            entries[a][b] = total
    return SeifertMatrix(size // 2, tuple(tuple(row) for row in entries))


def _sympy_to_laurent(expr, t: sympy.Symbol, shift: int = 0) -> LaurentPoly:
    poly = sympy.Poly(sympy.expand(expr), t)
    return LaurentPoly.from_powers(
        {k[0] + shift: int(c) for k, c in zip(poly.monoms(), poly.coeffs())}
    )


def _conway_from_alexander(delta: LaurentPoly) -> LaurentPoly:
    rest = delta
    step = LaurentPoly.from_powers({1: 1, 0: -2, -1: 1})
    out = {}
    while rest:
        k = int(rest.degree)
        c = rest.coefficient(k)
        out[2 * k] = c
        rest = rest - step**k * c
    return LaurentPoly.from_powers(out)


def alexander_conway(v: SeifertMatrix) -> tuple[LaurentPoly, LaurentPoly]:
    """Alexander and Conway polynomials of a Seifert matrix.

    ``Delta(t) = t^(-g) det(t V - V^T)``, made symmetric with ``Delta(1) = 1``.
    The Conway polynomial is recovered by peeling off powers of
    ``z^2 = t - 2 + t^-1``.

    Returns:
        ``(delta, conway)``; the Conway polynomial uses ``t`` as its variable
        name in the ``LaurentPoly`` and should be read as a polynomial in ``z``.
    """
    if v.size == 0:
        one = LaurentPoly.constant(1)
        return one, one
    t = sympy.Symbol("t")
    m = sympy.Matrix(v.entries)
    det = (t * m - m.T).det(method="berkowitz")
    delta = _sympy_to_laurent(det, t, -v.genus_bound).symmetrize()
    return delta, _conway_from_alexander(delta)


def alexander_from_diagram(d: KnotDiagram) -> LaurentPoly:
    """Alexander polynomial from the crossing relations of the diagram.

    Each crossing gives one row over the overpass arcs. A positive crossing
    puts ``1 - t`` on the over arc, ``t`` on the incoming and ``-1`` on the
    outgoing under arc; a negative one puts ``t - 1``, ``1`` and ``-t``. One
    row and one column are dropped.
    """
    n = d.n_crossings
    if n <= 1:
        return LaurentPoly.constant(1)
    parent: dict[int, int] = {}

    def find(a: int) -> int:
        while parent.setdefault(a, a) != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for x in d.crossings:
        ra, rb = find(x[1]), find(x[3])
        if ra != rb:
            parent[ra] = rb
    arcs = {root: i for i, root in enumerate(sorted({find(v) for x in d.crossings for v in x}))}
    t = sympy.Symbol("t")
    m = sympy.zeros(n, len(arcs))
    for row, (x, sign) in enumerate(zip(d.crossings, d.signs())):
        over, under_in, under_out = arcs[find(x[1])], arcs[find(x[0])], arcs[find(x[2])]
        if sign > 0:
            m[row, over] += 1 - t
            m[row, under_in] += t
            m[row, under_out] -= 1
        else:
            m[row, over] += t - 1
            m[row, under_in] += 1
            m[row, under_out] -= t
    minor = m[1:, 1:].det(method="berkowitz")
    return _sympy_to_laurent(minor, t).symmetrize()


def determinant(v: SeifertMatrix) -> int:
    """``|det(V + V^T)|``; 1 for the empty matrix."""
    if v.size == 0:
        return 1
    return abs(int(sympy.Matrix(v.symmetrized().entries).det(method="bareiss")))


def signature(v: SeifertMatrix) -> int:
    """Signature of ``V + V^T``."""
    plus, minus, _ = matrix_signature(v.symmetrized())
    return plus - minus
