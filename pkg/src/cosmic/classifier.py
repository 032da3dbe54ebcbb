"""Criteria for ruling out chirally cosmetic surgeries, with an audit trail.

Every criterion is evaluated independently and each one that fires is
recorded, so per-criterion counts can be tabulated afterwards. A knot is
``NO_CCS`` when any primary criterion or an auxiliary family rule fires.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import StrEnum
from fractions import Fraction
from typing import Any

from .errors import MissingData
from .finite_type import INFINITY, InvariantRecord
from .floer import RankProfile

logger = logging.getLogger(__name__)

PRIMARY_TAGS = ("i-a", "i-a'", "i-b", "i-c", "ii", "iii", "genus1-alt", "torus-non2p")
ZERO_TYPE_TAGS = ("v3v5-zero-type", "so3-zero-type")


class Status(StrEnum):
    EXCLUDED_BY_FAMILY = "excluded_by_family"
    NO_CCS = "no_ccs"
    ZERO_TYPE_RULED_OUT_ONLY = "zero_type_ruled_out_only"
    UNDETECTED = "undetected"


@dataclass
class Verdict:
    """Outcome of :func:`classify` for one knot.

    Attributes:
        knot: Knot name.
        status: Overall status; see :class:`Status`.
        fired: Tags of the criteria that fired, in evaluation order.
        audit: Per criterion, the inputs used, the threshold and the value.
        missing: Criteria that could not be evaluated for lack of data.
        zero_type_ruled_out: True when 0-type surgeries are excluded.
    """

    knot: str
    status: Status
    fired: list[str] = field(default_factory=list)
    audit: dict[str, dict[str, Any]] = field(default_factory=dict)
    missing: list[str] = field(default_factory=list)
    zero_type_ruled_out: bool = False

    def to_dict(self) -> dict:
        return {
            "knot": self.knot,
            "status": str(self.status),
            "fired": list(self.fired),
            "audit": {k: _jsonable(v) for k, v in sorted(self.audit.items())},
            "missing": list(self.missing),
            "zero_type_ruled_out": self.zero_type_ruled_out,
        }


def _jsonable(value):
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in sorted(value.items())}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, Fraction):
        return str(value)
    if value == INFINITY:
        return "inf"
    return value


def degree_two_combination(rec: InvariantRecord) -> int:
    """``7 a2^2 - a2 - 10 a4``."""
    return 7 * rec.a2 * rec.a2 - rec.a2 - 10 * rec.a4


class _Audit:
    def __init__(self, rec: InvariantRecord):
        self.rec = rec
        self.fired: list[str] = []
        self.audit: dict[str, dict[str, Any]] = {}
        self.missing: list[str] = []

    def check(self, tag: str, fires: bool, **details) -> None:
        self.audit[tag] = {"fires": fires, **details}
        if fires:
            self.fired.append(tag)

    def skip(self, tag: str, needs: list[str]) -> None:
        self.missing.append(tag)
        self.audit[tag] = {"fires": False, "skipped": True, "needs": needs}


def _nu_and_genus(
    rec: InvariantRecord, profile: RankProfile | None
) -> tuple[int | None, int | None]:
    if profile is not None:
        return profile.nu, profile.genus
    return rec.max_nu, rec.genus


def _check_o_bounds(a: _Audit, nu: int | None, genus: int | None) -> None:
    o = a.rec.O_K
    if nu is None or genus is None:
        # O <= 2 excludes +-type whichever of (i-a) or (i-a') applies
        needs = [k for k, v in (("nu", nu), ("genus", genus)) if v is None]
        a.missing.append("i-a'")
        a.check("i-a", o <= 2, O=o, threshold=2, fallback=True, needs=needs)
        return
    if genus == nu:
        a.check("i-a", o <= 2, O=o, threshold=2, genus=genus, max_nu=nu)
        a.audit["i-a'"] = {"fires": False, "applies": False}
    else:
        a.audit["i-a"] = {"fires": False, "applies": False}
        a.check("i-a'", o <= 4, O=o, threshold=4, genus=genus, max_nu=nu)


def _check_thin(a: _Audit) -> None:
    rec = a.rec
    if not rec.thin:
        a.audit["i-b"] = {"fires": False, "applies": False}
        return
    if rec.tau is None:
        a.skip("i-b", ["tau"])
        return
    threshold = Fraction(abs(rec.det) - 2 * abs(rec.tau) - 1, 2)
    a.check("i-b", rec.O_K <= threshold, O=rec.O_K, threshold=threshold, det=rec.det, tau=rec.tau)


def _check_degree(a: _Audit) -> None:
    rec = a.rec
    if rec.d_alex == 0:
        a.check("i-c", False, O=rec.O_K, d=0)
        return
    threshold = Fraction(abs(8 * rec.a2), rec.d_alex)
    a.check("i-c", rec.O_K <= threshold, O=rec.O_K, threshold=threshold, a2=rec.a2, d=rec.d_alex)


def _check_audit_only(a: _Audit, nu: int | None, genus: int | None) -> None:
    rec = a.rec
    if rec.v3 == 0:
        return
    x = degree_two_combination(rec)
    # +-type needs 4|a2| < d |x / (8 v3)|
    rhs = rec.d_alex * abs(Fraction(x) / (8 * rec.v3))
    a.audit["criteria-old"] = {
        "obstructs": not 4 * abs(rec.a2) < rhs,
        "lhs": 4 * abs(rec.a2),
        "rhs": rhs,
        "audit_only": True,
    }
    if nu is not None and genus is not None:
        bound = 4 if genus != nu else 2
        a.audit["weak"] = {
            "obstructs": not abs(x) > bound * abs(4 * rec.v3),
            "bound": bound,
            "audit_only": True,
        }


def zero_type_ruled_out(rec: InvariantRecord, so3_obstructed: bool = False) -> tuple[str, ...]:
    """Tags of the routes that exclude 0-type surgeries on ``rec``.

    Args:
        rec: Populated invariant record.
        so3_obstructed: True when the SO(3) obstruction fired at every
            tested slope.
    """
    tags = []
    if rec.v3 != 0 or rec.v5 != 0:
        tags.append("v3v5-zero-type")
    if so3_obstructed:
        tags.append("so3-zero-type")
    return tuple(tags)


def zero_type_only(
    rec: InvariantRecord,
    so3_obstructed: bool = False,
    verdict: Verdict | None = None,
) -> Status | None:
    """``ZERO_TYPE_RULED_OUT_ONLY`` when 0-type is excluded but +-type is not.

    Args:
        rec: Populated invariant record.
        so3_obstructed: Outcome of the SO(3) adjunct over the tested slopes.
        verdict: Verdict of :func:`classify`; when it already rules out every
            surgery the result is None.
    """
    if verdict is not None and verdict.status in (Status.NO_CCS, Status.EXCLUDED_BY_FAMILY):
        return None
    if zero_type_ruled_out(rec, so3_obstructed):
        return Status.ZERO_TYPE_RULED_OUT_ONLY
    return None


def classify(
    rec: InvariantRecord,
    profile: RankProfile | None = None,
    *,
    so3_obstructed: bool = False,
    strict: bool = False,
) -> Verdict:
    """Evaluate every criterion on one knot.

    Args:
        rec: Populated invariant record.
        profile: Floer profile; when absent, ``nu`` and the genus come from
            the record, and criteria needing them fall back or are skipped.
        so3_obstructed: Outcome of the SO(3) adjunct; reported, never
            counted towards ``NO_CCS``.
        strict: Raise instead of recording skipped criteria.

    Raises:
        MissingData: In strict mode, if some criterion could not be evaluated.
    """
    a = _Audit(rec)
    nu, genus = _nu_and_genus(rec, profile)
    _check_o_bounds(a, nu, genus)
    _check_thin(a)
    _check_degree(a)
    if nu is None:
        a.skip("ii", ["nu"])
    else:
        a.check("ii", rec.v3 != 0 and nu == 0, v3=rec.v3, max_nu=nu)
    x = degree_two_combination(rec)
    a.check("iii", rec.v3 == 0 and rec.v5 != 0 and x != 0, v3=rec.v3, v5=rec.v5, combination=x)
    a.check(
        "genus1-alt",
        genus == 1 and rec.alternating and not rec.amphicheiral and not rec.torus_2p,
        genus=genus,
        alternating=rec.alternating,
    )
    a.check("torus-non2p", rec.torus_other)
    _check_audit_only(a, nu, genus)
    zero_tags = zero_type_ruled_out(rec, so3_obstructed)
    for tag in zero_tags:
        a.audit[tag] = {"fires": True, "reporting_only": True}

    if strict and a.missing:
        raise MissingData(a.missing, rec.name)
    if rec.amphicheiral or rec.torus_2p:
        status = Status.EXCLUDED_BY_FAMILY
    elif any(tag in PRIMARY_TAGS for tag in a.fired):
        status = Status.NO_CCS
    else:
        status = Status.UNDETECTED
    if a.missing:
        logger.debug("%s: criteria skipped for lack of data: %s", rec.name, a.missing)
    return Verdict(
        knot=rec.name,
        status=status,
        fired=a.fired + list(zero_tags),
        audit=a.audit,
        missing=a.missing,
        zero_type_ruled_out=bool(zero_tags),
    )
