"""Quantum SO(3) invariants of rational surgeries at odd level ``r``.

Values live in ``Q(zeta_{2r})``, with ``q = zeta_{2r}^2`` a primitive ``r``-th
root of unity and ``q^(1/2) = zeta_{2r}``. The surgery ``m/n`` is presented by
a chain link built from the continued fraction of ``m/n``; its invariant is a
linear combination ``sum_i c^i(m/n) Q_i(K)`` of colored Jones values of ``K``
for colors ``1..(r-1)/2``.

Example:
    >>> from cosmic.knot_model import Slope
    >>> lens_space_tau(5, Slope(1, 1)) == 1
    True
"""

from __future__ import annotations

import itertools
import json
import logging
import math
from dataclasses import dataclass
from enum import StrEnum
from fractions import Fraction
from functools import lru_cache
from pathlib import Path

from .algebra import (
    CyclotomicElement,
    LaurentPoly,
    SymIntMatrix,
    cyclotomic_invert,
    cyclotomic_root,
    matrix_signature,
)
from .errors import DegenerateConstant, MissingColor, ParseError
from .knot_model import Slope

logger = logging.getLogger(__name__)

METHODS = ("transfer", "brute")


def _check_level(r: int) -> None:
    if r < 3 or r % 2 == 0:
        raise ValueError(f"r must be an odd integer >= 3, got {r}")


@lru_cache(maxsize=None)
def _quantum_integer_reduced(k: int, r: int) -> CyclotomicElement:
    level = 2 * r
    coeffs = [0] * level
    for j in range(k):
        coeffs[(k - 1 - 2 * j) % level] += 1
    return CyclotomicElement(level, coeffs)


def quantum_integer(n: int, r: int) -> CyclotomicElement:
    """``[n] = sum_j q^((n-1)/2 - j)`` at ``q = zeta_r``, exactly.

    ``[n]`` is periodic in ``n`` with period ``2r`` and odd in ``n``.
    """
    _check_level(r)
    if n < 0:
        return -quantum_integer(-n, r)
    return _quantum_integer_reduced(n % (2 * r), r)


def _q_power(quarter_steps: int, r: int) -> CyclotomicElement:
    # q^(k/4) = zeta_{2r}^(k/2); k is even at every call site
    return cyclotomic_root(2 * r, quarter_steps // 2)


def _odd_colors(r: int) -> range:
    return range(1, r, 2)


def _framing(n: int, a: int, r: int) -> CyclotomicElement:
    """``q^((n^2 - 1) a / 4)`` for odd ``n``."""
    return _q_power((n * n - 1) * a, r)


@lru_cache(maxsize=None)
def c_plus_minus(r: int) -> tuple[CyclotomicElement, CyclotomicElement]:
    """The constants ``c_+`` and ``c_-`` of the ``+1``- and ``-1``-framed unknot.

    Raises:
        DegenerateConstant: If ``c_+`` vanishes.
    """
    _check_level(r)
    plus = CyclotomicElement.zero(2 * r)
    minus = CyclotomicElement.zero(2 * r)
    for n in _odd_colors(r):
        square = quantum_integer(n, r) * quantum_integer(n, r)
        plus = plus + _framing(n, 1, r) * square
        minus = minus + _framing(n, -1, r) * square
    if plus.is_zero():
        raise DegenerateConstant(f"c_+ vanishes at r={r}")
    return plus, minus


@dataclass(frozen=True)
class ContinuedFraction:
    """Negative continued fraction ``a_0 - 1/(a_1 - 1/(... - 1/a_l))``."""

    terms: tuple[int, ...]

    def __post_init__(self):
        if not self.terms:
            raise ValueError("a continued fraction needs at least one term")
        object.__setattr__(self, "terms", tuple(int(a) for a in self.terms))

    @classmethod
    def of(cls, value: Fraction | Slope) -> ContinuedFraction:
        """Canonical expansion by repeated ceiling division.

        Every term after the first is at least 2.
        """
        x = value.value if isinstance(value, Slope) else Fraction(value)
        terms = []
        while True:
            a = math.ceil(x)
            terms.append(a)
            if a == x:
                return cls(tuple(terms))
            x = 1 / (a - x)

    @property
    def length(self) -> int:
        """``l``: number of chain components after the knot."""
        return len(self.terms) - 1

    def value(self) -> Fraction:
        return continued_fraction_value(self.terms)

    def linking_matrix(self) -> SymIntMatrix:
        return linking_matrix(self.terms)


def continued_fraction(s: Slope) -> ContinuedFraction:
    return ContinuedFraction.of(s)


def continued_fraction_value(terms: tuple[int, ...] | list[int]) -> Fraction:
    """Evaluate ``[a_0, ..., a_l]`` back to a rational.

    Raises:
        ZeroDivisionError: If an intermediate tail evaluates to 0.
    """
    acc = Fraction(terms[-1])
    for a in reversed(terms[:-1]):
        acc = a - 1 / acc
    return acc


def linking_matrix(terms: tuple[int, ...] | list[int]) -> SymIntMatrix:
    """Tridiagonal linking matrix of the chain link, framings on the diagonal."""
    size = len(terms)
    rows = [[0] * size for _ in range(size)]
    for i, a in enumerate(terms):
        rows[i][i] = a
        if i + 1 < size:
            rows[i][i + 1] = rows[i + 1][i] = 1
    return SymIntMatrix.from_rows(rows)


def color_index(i: int, r: int) -> int:
    """``n(i)``: ``i`` for odd ``i``, ``r - i`` for even ``i``."""
    return i if i % 2 else r - i


@dataclass(frozen=True)
class CoefficientVector:
    """``c^i(m/n)`` for ``i = 1..(r-1)/2``; ``entries[0]`` is ``c^1``."""

    r: int
    entries: tuple[CyclotomicElement, ...]

    def conjugate(self) -> CoefficientVector:
        return CoefficientVector(self.r, tuple(c.conjugate() for c in self.entries))

    def dot(self, values: tuple[CyclotomicElement, ...]) -> CyclotomicElement:
        total = CyclotomicElement.zero(2 * self.r)
        for c, v in zip(self.entries, values, strict=True):
            total = total + c * v
        return total


def _chain_brute(r: int, head: int, tail: tuple[int, ...]) -> CyclotomicElement:
    total = CyclotomicElement.zero(2 * r)
    for colors in itertools.product(_odd_colors(r), repeat=len(tail)):
        term = CyclotomicElement.one(2 * r)
        prev = head
        for n, a in zip(colors, tail):
            term = term * quantum_integer(prev * n, r) * _framing(n, a, r)
            prev = n
        total = total + term * quantum_integer(prev, r)
    return total


def _chain_transfer(r: int, head: int, tail: tuple[int, ...]) -> CyclotomicElement:
    colors = list(_odd_colors(r))
    vector = {n: quantum_integer(n, r) for n in colors}
    for a in reversed(tail):
        weighted = {n: _framing(n, a, r) * vector[n] for n in colors}
        vector = {
            row: sum(
                (quantum_integer(row * n, r) * weighted[n] for n in colors),
                CyclotomicElement.zero(2 * r),
            )
            for row in colors
        }
    return vector[head] if tail else quantum_integer(head, r)


def _chain_sums(
    r: int, expansion: ContinuedFraction, method: str
) -> tuple[CyclotomicElement, ...]:
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}, got {method!r}")
    chain = _chain_transfer if method == "transfer" else _chain_brute
    a0, tail = expansion.terms[0], expansion.terms[1:]
    out = []
    for i in range(1, (r - 1) // 2 + 1):
        head = color_index(i, r)
        out.append(_framing(head, a0, r) * chain(r, head, tail))
    return tuple(out)


def unnormalized_coefficients(
    r: int,
    s: Slope,
    *,
    expansion: ContinuedFraction | None = None,
    method: str = "transfer",
) -> tuple[tuple[CyclotomicElement, ...], tuple[int, int]]:
    """Coefficient sums before the ``c_+^-sigma_+ c_-^-sigma_-`` prefactor.

    Returns:
        The sums and ``(sigma_plus, sigma_minus)`` of the linking matrix.
    """
    _check_level(r)
    expansion = expansion or continued_fraction(s)
    if expansion.value() != s.value:
        raise ValueError(f"expansion {list(expansion.terms)} does not evaluate to {s}")
    plus, minus, _ = matrix_signature(expansion.linking_matrix())
    return _chain_sums(r, expansion, method), (plus, minus)


@lru_cache(maxsize=512)
def coefficient_vector(
    r: int,
    s: Slope,
    *,
    expansion: ContinuedFraction | None = None,
    method: str = "transfer",
) -> CoefficientVector:
    """``v(r, m/n)``: the coefficients pairing with the colored Jones vector.

    Args:
        r: Odd level, at least 3.
        s: Slope; ``n < 0`` gives the negated slope.
        expansion: Continued fraction to present the surgery with; the
            canonical one when omitted.
        method: ``"transfer"`` folds the chain into matrix-vector products,
            ``"brute"`` sums over every tuple of chain colors.
    """
    sums, (sigma_plus, sigma_minus) = unnormalized_coefficients(
        r, s, expansion=expansion, method=method
    )
    c_plus, c_minus = c_plus_minus(r)
    prefactor = cyclotomic_invert(c_plus) ** sigma_plus * cyclotomic_invert(c_minus) ** sigma_minus
    return CoefficientVector(r, tuple(prefactor * c for c in sums))


@dataclass(frozen=True)
class ColoredJonesVector:
    """``Q_i(K)`` at ``q = zeta_r`` for colors ``i = 1..(r-1)/2``.

    Normalized so the unknot has ``Q_i = [i]``.
    """

    r: int
    entries: tuple[CyclotomicElement, ...]

    def conjugate(self) -> ColoredJonesVector:
        return ColoredJonesVector(self.r, tuple(c.conjugate() for c in self.entries))

    @classmethod
    def unknot(cls, r: int) -> ColoredJonesVector:
        return cls(r, tuple(quantum_integer(i, r) for i in range(1, (r - 1) // 2 + 1)))


def colored_jones_vector(
    r: int,
    jones: LaurentPoly,
    extra: tuple[CyclotomicElement, ...] | None = None,
) -> ColoredJonesVector:
    """Colored Jones vector from the Jones polynomial and supplied higher colors.

    Colors 1 and 2 come from ``V_K``: ``Q_1 = 1`` and ``Q_2 = [2] V_K(q^-1)``.

    Raises:
        MissingColor: If ``r >= 7`` and ``extra`` does not supply colors 3 and up.
    """
    _check_level(r)
    count = (r - 1) // 2
    entries = [CyclotomicElement.one(2 * r)]
    if count >= 2:
        # t = q^-1 means t^(1/2) = zeta_{2r}^-1
        entries.append(quantum_integer(2, r) * jones.evaluate_root(2 * r, -1))
    if count > 2:
        needed = count - 2
        if extra is None or len(extra) < needed:
            raise MissingColor(
                f"r={r} needs colored Jones values for colors 3..{count}"
            )
        entries.extend(extra[:needed])
    return ColoredJonesVector(r, tuple(entries))


def tau_so3_surgery(
    r: int,
    jones_values: ColoredJonesVector,
    s: Slope,
    *,
    method: str = "transfer",
) -> CyclotomicElement:
    """``tau_r(S^3_K(m/n)) = V_r(K) . v(r, m/n)``."""
    if jones_values.r != r:
        raise ValueError(f"colored Jones vector is for r={jones_values.r}, not {r}")
    return coefficient_vector(r, s, method=method).dot(jones_values.entries)


def lens_space_tau(
    r: int, s: Slope, *, expansion: ContinuedFraction | None = None
) -> CyclotomicElement:
    """``tau_r`` of ``m/n`` surgery on the unknot, the lens space ``L(m, n)``."""
    return coefficient_vector(r, s, expansion=expansion).dot(
        ColoredJonesVector.unknot(r).entries
    )


class ZeroTypeVerdict(StrEnum):
    OBSTRUCTED = "obstructed"
    NOT_OBSTRUCTED = "not_obstructed"


def _obstruction_vector(
    r: int, jones: LaurentPoly, supplied: ColoredJonesVector | None
) -> ColoredJonesVector:
    if supplied is None:
        return colored_jones_vector(r, jones)
    if supplied.r != r or len(supplied.entries) != (r - 1) // 2:
        raise MissingColor(f"supplied colored Jones values do not cover r={r}")
    return supplied


def zero_type_obstruction(
    r: int,
    jones: LaurentPoly,
    s: Slope,
    *,
    supplied: ColoredJonesVector | None = None,
) -> ZeroTypeVerdict:
    """Decide whether ``S^3_K(m/n)`` and ``-S^3_K(-m/n)`` are told apart.

    The pair is obstructed when ``V_r(K) . v`` differs from its value on the
    conjugated colored Jones vector. At ``r = 5`` this is exactly
    ``V_K(zeta_5)`` not real together with ``c^2_5(m/n) != 0``.

    Args:
        r: Odd level.
        jones: Jones polynomial of the knot.
        s: Slope of the pair ``m/n`` and ``-m/n``.
        supplied: Full colored Jones vector, required for ``r >= 7``.

    Raises:
        MissingColor: For ``r >= 7`` without supplied values.
    """
    values = _obstruction_vector(r, jones, supplied)
    v = coefficient_vector(r, s)
    if v.dot(values.entries) != v.dot(values.conjugate().entries):
        return ZeroTypeVerdict.OBSTRUCTED
    return ZeroTypeVerdict.NOT_OBSTRUCTED


def zero_type_obstruction_cleared(
    r: int,
    jones: LaurentPoly,
    s: Slope,
    *,
    supplied: ColoredJonesVector | None = None,
) -> ZeroTypeVerdict:
    """Same decision as :func:`zero_type_obstruction` without inverting ``c_+-``.

    Both sides of the equality are multiplied by ``c_+^sigma_+ c_-^sigma_-``,
    which is nonzero, so only the unnormalized sums are needed.
    """
    values = _obstruction_vector(r, jones, supplied)
    sums, _ = unnormalized_coefficients(r, s)
    lhs = CoefficientVector(r, sums)
    if lhs.dot(values.entries) != lhs.dot(values.conjugate().entries):
        return ZeroTypeVerdict.OBSTRUCTED
    return ZeroTypeVerdict.NOT_OBSTRUCTED


def load_colored_jones(path: str | Path) -> dict[str, ColoredJonesVector]:
    """Read supplied colored Jones values.

    The file holds one object or a list of objects
    ``{"knot": name, "r": r, "colors": [[c_0, c_1, ...], ...]}``; each color
    is a coefficient vector in powers of ``zeta_{2r}``, entries given as
    integers or fraction strings. Colors start at 1.

    Raises:
        ParseError: On malformed JSON or missing keys.
    """
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    if isinstance(data, dict):
        data = [data]
    out = {}
    for item in data:
        try:
            r = int(item["r"])
            entries = tuple(
                CyclotomicElement(2 * r, [Fraction(c) for c in color])
                for color in item["colors"]
            )
            out[str(item["knot"])] = ColoredJonesVector(r, entries)
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"{path}: bad colored Jones entry {item!r}") from exc
    logger.debug("loaded colored Jones values for %d knots from %s", len(out), path)
    return out
