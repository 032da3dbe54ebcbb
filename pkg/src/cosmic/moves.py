"""Surgery on unoriented planar diagrams.

The skein engine works on bare crossing tuples rather than on
:class:`~cosmic.knot_model.KnotDiagram`: intermediate diagrams may be links,
carry free loops and use arbitrary integer labels. A crossing ``(a, b, c, d)``
lists its edges counterclockwise with the under-strand on slots 0 and 2; as an
unoriented crossing it equals ``(c, d, a, b)``.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence

Crossing = tuple[int, int, int, int]
Crossings = tuple[Crossing, ...]
Position = tuple[int, int]


def occurrences(crossings: Sequence[Crossing]) -> dict[int, list[Position]]:
    """Map each label to the two ``(crossing, slot)`` positions holding it."""
    where: dict[int, list[Position]] = {}
    for c, x in enumerate(crossings):
        for s, label in enumerate(x):
            where.setdefault(label, []).append((c, s))
    return where


def other_end(where: dict[int, list[Position]], label: int, pos: Position) -> Position:
    first, second = where[label]
    return second if first == pos else first


def switch(x: Crossing) -> Crossing:
    """Exchange over and under, keeping the counterclockwise order."""
    return (x[1], x[2], x[3], x[0])


def rotate_min(x: Crossing) -> Crossing:
    """Representative of ``x`` among its two equal unoriented rotations."""
    return min(x, (x[2], x[3], x[0], x[1]))


def splice(
    crossings: Sequence[Crossing],
    removed: Iterable[int],
    joins: Iterable[tuple[int, int]],
    discard: Iterable[int] = (),
) -> tuple[Crossings, int]:
    """Delete crossings and reconnect their edges.

    Args:
        crossings: The diagram.
        removed: Indices of crossings to delete.
        joins: Label pairs that become one edge.
        discard: Labels whose class vanishes without leaving a loop (the
            loop of a removed kink).

    Returns:
        The remaining crossings and the number of closed loops the surgery
        left with no crossing on them.
    """
    parent: dict[int, int] = {}

    def find(a: int) -> int:
        while parent.setdefault(a, a) != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for a, b in joins:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    removed = set(removed)
    kept = tuple(
        tuple(find(v) for v in x) for i, x in enumerate(crossings) if i not in removed
    )
    present = {v for x in kept for v in x}
    touched = {find(v) for i in removed for v in crossings[i]}
    dropped = {find(v) for v in discard}
    return kept, len(touched - present - dropped)


def smoothings(
    crossings: Sequence[Crossing], index: int
) -> tuple[tuple[Crossings, int], tuple[Crossings, int]]:
    """The two smoothings at one crossing, each with its count of new loops."""
    a, b, c, d = crossings[index]
    return (
        splice(crossings, [index], [(a, b), (c, d)]),
        splice(crossings, [index], [(a, d), (b, c)]),
    )


def find_kink(crossings: Sequence[Crossing]) -> tuple[int, int] | None:
    """First crossing with two adjacent slots joined by a loop.

    Returns:
        ``(index, p)`` with ``x[p] == x[p+1]``, or None.
    """
    for i, x in enumerate(crossings):
        for p in range(4):
            if x[p] == x[(p + 1) % 4]:
                return i, p
    return None


def find_r2(crossings: Sequence[Crossing]) -> tuple[int, int] | None:
    """First bigon whose bounding strand passes over (or under) at both ends."""
    where = occurrences(crossings)
    for i, x in enumerate(crossings):
        for p in range(4):
            lab1, lab2 = x[p], x[(p + 1) % 4]
            j, q = other_end(where, lab2, (i, (p + 1) % 4))
            if j == i or crossings[j][(q + 1) % 4] != lab1:
                continue
            if p % 2 == (q + 1) % 2:
                return i, j
    return None


def simplify(crossings: Sequence[Crossing]) -> tuple[Crossings, int, int]:
    """Greedily remove kinks and removable bigons.

    Returns:
        ``(core, a_power, loops)``: the reduced diagram, the power of ``a``
        picked up from kinks and the number of free loops split off.
    """
    current = tuple(crossings)
    a_power = 0
    loops = 0
    while current:
        kink = find_kink(current)
        if kink is not None:
            i, p = kink
            x = current[i]
            a_power += 1 if p % 2 == 0 else -1
            current, new_loops = splice(
                current, [i], [(x[(p + 2) % 4], x[(p + 3) % 4])], discard=[x[p]]
            )
            loops += new_loops
            continue
        bigon = find_r2(current)
        if bigon is None:
            break
        i, j = bigon
        x, y = current[i], current[j]
        current, new_loops = splice(
            current, [i, j], [(x[0], x[2]), (x[1], x[3]), (y[0], y[2]), (y[1], y[3])]
        )
        loops += new_loops
    return current, a_power, loops


def split_parts(crossings: Sequence[Crossing]) -> list[Crossings]:
    """Split a diagram into its connected pieces (crossings sharing an edge)."""
    parent = list(range(len(crossings)))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for positions in occurrences(crossings).values():
        ra, rb = find(positions[0][0]), find(positions[-1][0])
        if ra != rb:
            parent[ra] = rb
    groups: dict[int, list[Crossing]] = {}
    for i, x in enumerate(crossings):
        groups.setdefault(find(i), []).append(x)
    return [tuple(g) for g in groups.values()]


def walk(
    crossings: Sequence[Crossing], where: dict[int, list[Position]], start: Position
) -> list[Position]:
    """Passages met travelling out of ``start`` until the strand closes.

    Each passage is ``(crossing, entry_slot)``.
    """
    passages = []
    pos = start
    while True:
        c, s = pos
        c2, s2 = other_end(where, crossings[c][s], pos)
        passages.append((c2, s2))
        pos = (c2, (s2 + 2) % 4)
        if pos == start:
            return passages


def component_walks(crossings: Sequence[Crossing]) -> list[list[Position]]:
    """One walk per link component, each started at its first free slot."""
    where = occurrences(crossings)
    seen: set[int] = set()
    walks = []
    for c, x in enumerate(crossings):
        for s in range(4):
            if x[s] in seen:
                continue
            passages = walk(crossings, where, (c, s))
            for c2, s2 in passages:
                seen.add(crossings[c2][s2])
            walks.append(passages)
    return walks


def passage_sign(under_in: int, over_in: int) -> int:
    """Crossing sign from the entry slots of the two strands."""
    return 1 if (over_in - under_in) % 4 == 3 else -1
