"""Finite type invariants and the per-knot invariant record.

``a2`` and ``a4`` are Conway coefficients, ``v3`` comes from derivatives of
the Jones polynomial at 1 and ``v5`` from the degree-five coefficients
``k_{5,N}`` of the Kauffman polynomial expanded at ``a = i e^(N h)``,
``z = -i (e^h - e^-h)``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import TYPE_CHECKING

from .algebra import (
    ComplexSeries,
    LaurentPoly,
    LaurentPoly2,
    TruncatedSeries,
    exp_series,
    series_compose_exp,
)
from .config import Config
from .errors import NotThinConsistent
from .floer import ck_thin
from .knot_model import KnotDiagram
from .skein import SkeinCache, kauffman_polynomial

if TYPE_CHECKING:
    from .pipeline import KnotTableRow

logger = logging.getLogger(__name__)

V5_WEIGHTS = {
    2: Fraction(1, 768),
    3: Fraction(1, 768),
    4: Fraction(-1, 1536),
    5: Fraction(7, 61440),
}

INFINITY = math.inf


def conway_coeffs(conway: LaurentPoly) -> tuple[int, int]:
    """Coefficients ``(a2, a4)`` of ``z^2`` and ``z^4``."""
    return conway.coefficient(2), conway.coefficient(4)


def v3_from_jones(v: LaurentPoly) -> Fraction:
    """``v3 = -V'''(1)/144 - V''(1)/48``, exactly."""
    second = v.derivative().derivative()
    third = second.derivative()
    return -third.evaluate(1) / 144 - second.evaluate(1) / 48


def kauffman_substitution(rate: int, order: int) -> dict[str, ComplexSeries]:
    """``a = i e^(rate h)`` and ``z = -i (e^h - e^-h)`` as complex series."""
    zero = TruncatedSeries.zero(order)
    a = ComplexSeries(zero, exp_series(rate, order))
    z = ComplexSeries(zero, -(exp_series(1, order) - exp_series(-1, order)))
    return {"a": a, "z": z}


def _kauffman(source: LaurentPoly2 | KnotDiagram, cache: SkeinCache | None) -> LaurentPoly2:
    if isinstance(source, KnotDiagram):
        return kauffman_polynomial(source, cache)
    return source


def k_series(
    source: LaurentPoly2 | KnotDiagram,
    rate: int,
    order: int = 5,
    cache: SkeinCache | None = None,
) -> TruncatedSeries:
    """Whole truncated expansion ``sum_n k_{n,rate} h^n`` of the Kauffman polynomial.

    Raises:
        NonRealResult: If an imaginary coefficient survives.
    """
    f = _kauffman(source, cache)
    return series_compose_exp(f, kauffman_substitution(rate, order), order)


def k5N(
    source: LaurentPoly2 | KnotDiagram, rate: int, cache: SkeinCache | None = None
) -> Fraction:
    """Coefficient of ``h^5`` in the expansion at ``a = i e^(rate h)``."""
    if rate not in V5_WEIGHTS:
        raise ValueError(f"rate must be one of {sorted(V5_WEIGHTS)}, got {rate}")
    return k_series(source, rate, 5, cache).coefficient(5)


def v5_from_k(k: dict[int, Fraction]) -> Fraction:
    """Combine ``k_{5,2}..k_{5,5}`` into ``v5``."""
    return sum((V5_WEIGHTS[n] * Fraction(k[n]) for n in V5_WEIGHTS), Fraction(0))


def v5(source: LaurentPoly2 | KnotDiagram, cache: SkeinCache | None = None) -> Fraction:
    f = _kauffman(source, cache)
    return v5_from_k({n: k5N(f, n) for n in V5_WEIGHTS})


def check_v5_granularity(value: Fraction, name: str = "") -> bool:
    """Warn when ``v5`` is not a multiple of 1/48; never raises."""
    ok = (value * 48).denominator == 1
    if not ok:
        logger.warning("v5 of %s is %s, not in (1/48)Z", name or "knot", value)
    return ok


def obstruction_value(a2: int, a4: int, v3: Fraction) -> Fraction | float:
    """``|7 a2^2 - a2 - 10 a4| / |4 v3|``, or infinity when ``v3 == 0``."""
    if v3 == 0:
        return INFINITY
    return Fraction(abs(7 * a2 * a2 - a2 - 10 * a4)) / abs(4 * v3)


def alexander_degree(delta: LaurentPoly, mode: str = "top") -> int:
    """``d(K)`` read off a symmetric Alexander polynomial.

    Args:
        delta: Normalized Alexander polynomial.
        mode: ``"top"`` for the largest exponent, ``"breadth"`` for the span.
    """
    top = int(delta.degree) if delta else 0
    if mode == "top":
        return top
    if mode == "breadth":
        return 2 * top
    raise ValueError(f"unknown degree mode {mode!r}")


@dataclass(frozen=True)
class KnotPolynomials:
    """Polynomial invariants computed from one diagram."""

    jones: LaurentPoly
    alexander: LaurentPoly
    conway: LaurentPoly
    kauffman: LaurentPoly2
    determinant: int
    signature: int
    writhe: int

    def to_json(self) -> dict:
        return {
            "jones": self.jones.to_json(),
            "alexander": self.alexander.to_json(),
            "conway": self.conway.to_json(),
            "kauffman": self.kauffman.to_json(),
            "determinant": self.determinant,
            "signature": self.signature,
            "writhe": self.writhe,
        }

    @classmethod
    def from_json(cls, data: dict) -> KnotPolynomials:
        return cls(
            jones=LaurentPoly.from_json(data["jones"]),
            alexander=LaurentPoly.from_json(data["alexander"]),
            conway=LaurentPoly.from_json(data["conway"]),
            kauffman=LaurentPoly2.from_json(data["kauffman"]),
            determinant=int(data["determinant"]),
            signature=int(data["signature"]),
            writhe=int(data["writhe"]),
        )


@dataclass(frozen=True)
class InvariantRecord:
    """Every computed or ingested invariant of one knot.

    ``O_K`` is ``math.inf`` when ``v3 == 0``. ``C_K`` is known only for
    homologically thin knots.
    """

    name: str
    a2: int
    a4: int
    v3: Fraction
    v5: Fraction
    det: int
    d_alex: int
    genus: int | None = None
    sigma: int | None = None
    tau: int | None = None
    nu: int | None = None
    nu_mirror: int | None = None
    alternating: bool = False
    quasi_alternating: bool | None = None
    amphicheiral: bool = False
    torus_2p: bool = False
    torus_other: bool = False
    C_K: int | None = None
    O_K: Fraction | float = INFINITY

    @property
    def thin(self) -> bool:
        return self.alternating or bool(self.quasi_alternating)

    @property
    def max_nu(self) -> int | None:
        if self.nu is None or self.nu_mirror is None:
            return None
        return max(self.nu, self.nu_mirror)

    def to_dict(self) -> dict:
        out = asdict(self)
        for key in ("v3", "v5"):
            out[key] = str(out[key])
        out["O_K"] = "inf" if self.O_K == INFINITY else str(self.O_K)
        return out


def obstruction_O(rec: InvariantRecord) -> Fraction | float:
    """``O(K)`` of a populated record."""
    return obstruction_value(rec.a2, rec.a4, rec.v3)


def build_record(
    row: KnotTableRow, polys: KnotPolynomials, config: Config | None = None
) -> InvariantRecord:
    """Assemble the invariant record of a table row from its polynomials.

    ``|tau| = |sigma|/2`` is used for alternating and quasi-alternating
    knots, with the ingested signature when present. ``C_K`` follows from the
    thin formula for those knots. An alternating knot without an ingested
    genus gets the degree of its Alexander polynomial.
    """
    config = config or Config()
    a2, a4 = conway_coeffs(polys.conway)
    v3 = v3_from_jones(polys.jones)
    f = polys.kauffman
    v5_value = v5(f)
    check_v5_granularity(v5_value, row.name)
    thin = row.alternating or bool(row.quasi_alternating)
    sigma = row.signature if row.signature is not None else polys.signature
    tau = abs(sigma) // 2 if thin else None
    genus = row.genus
    if genus is None and row.alternating:
        genus = alexander_degree(polys.alexander, "top")
    c_k = None
    if thin:
        try:
            c_k = ck_thin(polys.determinant, tau)
        except NotThinConsistent as exc:
            logger.warning("%s: %s", row.name, exc)
    torus = row.torus
    torus_2p = torus is not None and min(abs(torus[0]), abs(torus[1])) == 2
    return InvariantRecord(
        name=row.name,
        a2=a2,
        a4=a4,
        v3=v3,
        v5=v5_value,
        det=polys.determinant,
        d_alex=alexander_degree(polys.alexander, config.degree_mode),
        genus=genus,
        sigma=sigma,
        tau=tau,
        nu=row.nu,
        nu_mirror=row.nu_mirror,
        alternating=row.alternating,
        quasi_alternating=row.quasi_alternating,
        amphicheiral=row.amphicheiral,
        torus_2p=torus_2p,
        torus_other=torus is not None and not torus_2p,
        C_K=c_k,
        O_K=obstruction_value(a2, a4, v3),
    )
