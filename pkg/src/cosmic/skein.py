"""Jones, bracket and Kauffman polynomials of knot diagrams.

The Jones polynomial comes from the Kauffman bracket state sum. The
two-variable Kauffman polynomial comes from the regular-isotopy invariant
``L`` evaluated by skein recursion toward descending diagrams:

* ``L(O) = 1`` and a disjoint loop multiplies by ``delta = (a + 1/a)/z - 1``;
* a kink contributes ``a`` or ``1/a`` according to its sign;
* ``L(D+) + L(D-) = z (L(D0) + L(Dinf))``.

A descending diagram of ``c`` components has ``L = a^w delta^(c-1)`` with
``w`` its self-writhe, and ``F = a^(-writhe) L``.

Example:
    >>> from cosmic.knot_model import parse_pd, mirror
    >>> right = mirror(parse_pd("X[1,4,2,5], X[3,6,4,1], X[5,2,6,3]"))
    >>> str(jones(right))
    '-t^4 + t^3 + t'
"""

from __future__ import annotations

import itertools
import logging
from collections import Counter
from dataclasses import dataclass, field

from .algebra import LaurentPoly, LaurentPoly2
from .config import Config
from .errors import NonRealResult, ResourceLimit
from .knot_model import KnotDiagram, writhe
from .moves import (
    Crossings,
    component_walks,
    occurrences,
    passage_sign,
    rotate_min,
    simplify,
    smoothings,
    split_parts,
    switch,
    walk,
)

logger = logging.getLogger(__name__)

_A = LaurentPoly2.monomial(1, 1, 0)
_A_INV = LaurentPoly2.monomial(1, -1, 0)
_Z = LaurentPoly2.monomial(1, 0, 1)
DELTA = (_A + _A_INV) * LaurentPoly2.monomial(1, 0, -1) - 1


def _check_size(d: KnotDiagram, max_crossings: int) -> None:
    if d.n_crossings > max_crossings:
        raise ResourceLimit(
            f"diagram has {d.n_crossings} crossings, cap is {max_crossings}"
        )


def kauffman_bracket(d: KnotDiagram, *, max_crossings: int = Config.max_crossings) -> LaurentPoly:
    """Kauffman bracket ``<D>`` in the variable ``A``, with ``<O> = 1``.

    Each crossing ``X[i,j,k,l]`` expands as ``A <P[i,j] P[k,l]> + A^-1 <P[i,l] P[j,k]>``.
    """
    _check_size(d, max_crossings)
    if d.n_crossings == 0:
        return LaurentPoly.constant(1)
    counts: dict[tuple[int, int], int] = {}
    for state in itertools.product((0, 1), repeat=d.n_crossings):
        parent: dict[int, int] = {}

        def find(a: int) -> int:
            while parent.setdefault(a, a) != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for (i, j, k, l), s in zip(d.crossings, state):
            pairs = ((i, j), (k, l)) if s == 0 else ((i, l), (j, k))
            for u, v in pairs:
                ru, rv = find(u), find(v)
                if ru != rv:
                    parent[ru] = rv
        loops = len({find(v) for x in d.crossings for v in x})
        key = (d.n_crossings - 2 * sum(state), loops)
        counts[key] = counts.get(key, 0) + 1
    loop_value = -LaurentPoly.monomial(1, 2) - LaurentPoly.monomial(1, -2)
    total = LaurentPoly()
    for (power, loops), count in counts.items():
        total = total + LaurentPoly.monomial(count, power) * loop_value ** (loops - 1)
    return total


def _a_to_t(poly_in_a: LaurentPoly) -> LaurentPoly:
    """Rewrite a polynomial in ``A`` with ``A^k -> t^(-k/4)``."""
    out = {}
    for doubled, c in poly_in_a.items():
        k = doubled // 2
        if k % 2:
            raise ValueError(f"A^{k} has no half-integer power of t")
        out[-k // 2] = c
    return LaurentPoly(out)


def jones(d: KnotDiagram, *, max_crossings: int = Config.max_crossings) -> LaurentPoly:
    """Jones polynomial ``V(t)`` by the bracket state sum, with ``V(unknot) = 1``.

    Raises:
        ResourceLimit: If the diagram exceeds ``max_crossings``.
    """
    bracket = kauffman_bracket(d, max_crossings=max_crossings)
    w = writhe(d)
    normalized = bracket * LaurentPoly.monomial(-1 if w % 2 else 1, -3 * w)
    return _a_to_t(normalized)


def jones_from_kauffman(f: LaurentPoly2) -> LaurentPoly:
    """Jones polynomial from ``F`` via ``a = -A^3``, ``z = A + A^-1``, ``t = A^-4``."""
    a = LaurentPoly.monomial(-1, 3)
    z = LaurentPoly.monomial(1, 1) + LaurentPoly.monomial(1, -1)
    return _a_to_t(f.substitute(a, z))


@dataclass
class SkeinCache:
    """Memo of ``L`` values of connected reduced diagrams.

    Keys are canonical relabelings of the diagram, so equal keys mean equal
    diagrams. One cache per process; values are deterministic, so sharing a
    warm cache between runs never changes a result.
    """

    table: dict[Crossings, LaurentPoly2] = field(default_factory=dict)
    hits: int = 0
    misses: int = 0

    def get(self, key: Crossings) -> LaurentPoly2 | None:
        value = self.table.get(key)
        if value is None:
            self.misses += 1
        else:
            self.hits += 1
        return value

    def put(self, key: Crossings, value: LaurentPoly2) -> None:
        self.table.setdefault(key, value)

    def clear(self) -> None:
        self.table.clear()
        self.hits = self.misses = 0

    def stats(self) -> dict[str, int]:
        return {"entries": len(self.table), "hits": self.hits, "misses": self.misses}

    def __len__(self) -> int:
        return len(self.table)


def canonical_key(crossings: Crossings) -> Crossings:
    """Relabel a diagram so that isomorphic knot diagrams share a key.

    A single-component diagram is relabeled along every starting edge and
    direction and the smallest result kept. Links get one deterministic
    relabeling, which is still a faithful key.
    """
    where = occurrences(crossings)
    walks = component_walks(crossings)

    def relabel(passages_lists) -> Crossings:
        mapping: dict[int, int] = {}
        for passages in passages_lists:
            for c, s in passages:
                mapping.setdefault(crossings[c][s], len(mapping) + 1)
        return tuple(
            sorted(rotate_min(tuple(mapping[v] for v in x)) for x in crossings)
        )

    if len(walks) > 1:
        return relabel(walks)
    best = None
    for c in range(len(crossings)):
        for s in range(4):
            key = relabel([walk(crossings, where, (c, s))])
            if best is None or key < best:
                best = key
    return best


class _Engine:
    def __init__(self, cache: SkeinCache, max_nodes: int):
        self.cache = cache
        self.max_nodes = max_nodes
        self.nodes = 0
        self._delta_powers = [LaurentPoly2.constant(1)]

    def delta(self, n: int) -> LaurentPoly2:
        while len(self._delta_powers) <= n:
            self._delta_powers.append(self._delta_powers[-1] * DELTA)
        return self._delta_powers[n]

    def value(self, crossings: Crossings, loops: int) -> LaurentPoly2:
        """``L`` of a diagram plus ``loops`` disjoint circles."""
        self.nodes += 1
        if self.nodes > self.max_nodes:
            raise ResourceLimit(f"skein recursion exceeded {self.max_nodes} nodes")
        core, a_power, new_loops = simplify(crossings)
        loops += new_loops
        parts = split_parts(core) if core else []
        result = self.delta(loops + len(parts) - 1).scale_a(a_power)
        for part in parts:
            result = result * self.connected(part)
        return result

    def connected(self, crossings: Crossings) -> LaurentPoly2:
        key = canonical_key(crossings)
        cached = self.cache.get(key)
        if cached is not None:
            return cached
        result = self.descend(key)
        self.cache.put(key, result)
        return result

    def _order(self, crossings: Crossings) -> list[list[tuple[int, int]]]:
        """Pick start, direction and order of the components to minimize bad crossings."""
        where = occurrences(crossings)
        chosen = []
        for passages in component_walks(crossings):
            starts = sorted({(c, s) for c, s in passages} | {(c, (s + 2) % 4) for c, s in passages})
            mine = {c for c, _ in passages}
            best, best_bad = None, None
            for start in starts:
                candidate = walk(crossings, where, start)
                visits = Counter(c for c, _ in candidate)
                seen, bad = set(), 0
                for c, s in candidate:
                    if c in seen:
                        continue
                    seen.add(c)
                    # self-crossings only; the strand must be over at its first passage
                    if s % 2 == 0 and visits[c] == 2:
                        bad += 1
                if best_bad is None or bad < best_bad:
                    best, best_bad = candidate, bad
            chosen.append((best, mine))
        if len(chosen) == 1:
            return [chosen[0][0]]

        def over_component(c: int) -> int:
            for idx, (passages, _) in enumerate(chosen):
                for cc, s in passages:
                    if cc == c and s % 2 == 1:
                        return idx
            raise AssertionError("crossing without an over passage")

        # between-component crossings: the over component should come first
        inter: dict[tuple[int, int], int] = {}
        for c in range(len(crossings)):
            owners = [i for i, (_, mine) in enumerate(chosen) if c in mine]
            if len(owners) == 2:
                over = over_component(c)
                under = owners[0] if owners[1] == over else owners[1]
                inter[(under, over)] = inter.get((under, over), 0) + 1
        indices = range(len(chosen))
        if len(chosen) <= 5:
            order = min(
                itertools.permutations(indices),
                key=lambda perm: sum(
                    count
                    for (under, over), count in inter.items()
                    if perm.index(under) < perm.index(over)
                ),
            )
        else:
            order, remaining = [], set(indices)
            while remaining:
                nxt = min(
                    remaining,
                    key=lambda i: (
                        sum(v for (u, o), v in inter.items() if u == i and o in remaining),
                        i,
                    ),
                )
                order.append(nxt)
                remaining.remove(nxt)
        return [chosen[i][0] for i in order]

    def descend(self, crossings: Crossings) -> LaurentPoly2:
        walks = self._order(crossings)
        seen: set[int] = set()
        bad = []
        for passages in walks:
            for c, s in passages:
                if c not in seen:
                    seen.add(c)
                    if s % 2 == 0:
                        bad.append(c)
        current = list(crossings)
        total = LaurentPoly2()
        sign = 1
        for c in bad:
            (a_side, a_loops), (b_side, b_loops) = smoothings(tuple(current), c)
            total = total + _Z * (self.value(a_side, a_loops) + self.value(b_side, b_loops)) * sign
            current[c] = switch(current[c])
            sign = -sign
        return total + self.descending_value(tuple(current)) * sign

    def descending_value(self, crossings: Crossings) -> LaurentPoly2:
        walks = component_walks(crossings)
        self_writhe = 0
        for passages in walks:
            entries: dict[int, list[int]] = {}
            for c, s in passages:
                entries.setdefault(c, []).append(s)
            for c, slots in entries.items():
                if len(slots) == 2:
                    under = next(s for s in slots if s % 2 == 0)
                    over = next(s for s in slots if s % 2 == 1)
                    self_writhe += passage_sign(under, over)
        return self.delta(len(walks) - 1).scale_a(self_writhe)


def regular_isotopy_l(
    d: KnotDiagram,
    cache: SkeinCache | None = None,
    *,
    max_crossings: int = Config.max_crossings,
    max_skein_nodes: int = Config.max_skein_nodes,
) -> LaurentPoly2:
    """The regular-isotopy invariant ``L`` of a knot diagram."""
    _check_size(d, max_crossings)
    engine = _Engine(cache if cache is not None else SkeinCache(), max_skein_nodes)
    if d.n_crossings == 0:
        return engine.value((), 1)
    result = engine.value(d.crossings, 0)
    logger.debug(
        "skein: %d crossings, %d nodes, cache %s", d.n_crossings, engine.nodes, engine.cache.stats()
    )
    return result


def kauffman_polynomial(
    d: KnotDiagram,
    cache: SkeinCache | None = None,
    *,
    max_crossings: int = Config.max_crossings,
    max_skein_nodes: int = Config.max_skein_nodes,
) -> LaurentPoly2:
    """Kauffman polynomial ``F(a, z) = a^(-writhe) L``, with ``F(unknot) = 1``.

    Args:
        d: Knot diagram; its orientation only enters through the writhe.
        cache: Memo shared across calls. A fresh one is used when omitted.
        max_crossings: Largest accepted diagram.
        max_skein_nodes: Budget of recursion nodes.

    Raises:
        ResourceLimit: If either budget is exceeded.
    """
    l_value = regular_isotopy_l(
        d, cache, max_crossings=max_crossings, max_skein_nodes=max_skein_nodes
    )
    return l_value.scale_a(-writhe(d))


def dubrovnik_from_kauffman(f: LaurentPoly2) -> LaurentPoly2:
    """``D(a, z) = F(ia, -iz)`` for a knot.

    Raises:
        NonRealResult: If some term ``a^p z^q`` has ``p + 3q`` odd.
    """
    out = {}
    for (p, q), c in f.items():
        exponent = p + 3 * q
        if exponent % 2:
            raise NonRealResult(f"term a^{p} z^{q} picks up a factor of i")
        out[(p, q)] = c if exponent % 4 == 0 else -c
    return LaurentPoly2(out)


def dubrovnik(
    d: KnotDiagram,
    cache: SkeinCache | None = None,
    *,
    max_crossings: int = Config.max_crossings,
    max_skein_nodes: int = Config.max_skein_nodes,
) -> LaurentPoly2:
    """Dubrovnik polynomial of a knot diagram."""
    return dubrovnik_from_kauffman(
        kauffman_polynomial(
            d, cache, max_crossings=max_crossings, max_skein_nodes=max_skein_nodes
        )
    )
