"""Heegaard Floer rank bookkeeping.

Nothing here computes Floer homology. Given ``nu``, ``C_K`` and the genus
(ingested, or derived for homologically thin knots from the determinant,
``|tau|`` and the Alexander coefficients), this module evaluates the rank of
``HF`` of rational surgeries and the constraints it puts on a pair of slopes
``m/n`` and ``m/n'`` giving orientation-reversingly homeomorphic surgeries.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction

from .errors import InconsistentSystem, NotThinConsistent, ValidationError
from .knot_model import Slope, SlopePair, SurgeryType, classify_slope_pair, normalize_slope

logger = logging.getLogger(__name__)


def ck_thin(det: int, tau_abs: int) -> int:
    """``C_K = (|det| - 2|tau| - 1) / 2`` for a homologically thin knot.

    Raises:
        NotThinConsistent: If the value is negative, odd or not an integer.
    """
    twice = abs(det) - 2 * abs(tau_abs) - 1
    if twice < 0 or twice % 4:
        raise NotThinConsistent(
            f"det={det}, |tau|={tau_abs} give C_K={Fraction(twice, 2)}, "
            "not a non-negative even integer"
        )
    return twice // 2


def thin_alexander_coeffs(delta) -> list[int]:
    """``|d_0|, ..., |d_g|`` of a symmetric Alexander polynomial.

    Raises:
        NotThinConsistent: If the nonzero coefficients do not alternate in sign.
    """
    top = int(delta.degree)
    coeffs = [delta.coefficient(i) for i in range(top + 1)]
    signs = {(1 if c > 0 else -1) * (-1) ** i for i, c in enumerate(coeffs) if c}
    if len(signs) > 1:
        raise NotThinConsistent(f"Alexander coefficients {coeffs} do not alternate")
    return [abs(c) for c in coeffs]


@dataclass(frozen=True)
class ThinComplexModel:
    """Staircase data of a thin knot Floer complex.

    Attributes:
        genus: ``g``, the top Alexander degree.
        tau_abs: ``|tau|``.
        d_abs: ``|d_0|..|d_g|``.
        epsilon: ``eps_0..eps_g``; ``eps_i = 1`` exactly when ``i <= |tau|``.
        delta: ``delta_1..delta_g``.
    """

    genus: int
    tau_abs: int
    d_abs: tuple[int, ...]
    epsilon: tuple[int, ...]
    delta: tuple[int, ...]

    @property
    def C_K(self) -> int:
        if not self.delta:
            return 0
        return 4 * sum(self.delta) - 2 * self.delta[0]


def solve_delta_system(d_abs: list[int], tau_abs: int) -> ThinComplexModel:
    """Solve for the box counts ``delta_j`` from the top degree down.

    ``|d_j| = eps_j + delta_j + 2 delta_{j+1} + delta_{j+2}`` for ``j >= 1``
    and ``|d_0| = eps_0 + 2 delta_1 + 2 delta_2``.

    Raises:
        InconsistentSystem: If some ``delta_j`` is negative or the ``d_0``
            equation fails.
    """
    g = len(d_abs) - 1
    eps = tuple(1 if i <= tau_abs else 0 for i in range(g + 1))
    delta = [0] * (g + 3)
    for j in range(g, 0, -1):
        delta[j] = d_abs[j] - eps[j] - 2 * delta[j + 1] - delta[j + 2]
        if delta[j] < 0:
            raise InconsistentSystem(
                f"delta_{j} = {delta[j]} < 0 for |d| = {list(d_abs)}, |tau| = {tau_abs}"
            )
    if d_abs[0] != eps[0] + 2 * delta[1] + 2 * delta[2]:
        raise InconsistentSystem(
            f"|d_0| = {d_abs[0]} does not match {eps[0]} + 2*{delta[1]} + 2*{delta[2]}"
        )
    return ThinComplexModel(g, tau_abs, tuple(d_abs), eps, tuple(delta[1 : g + 1]))


def genus_from_alexander(delta) -> int:
    """Genus of a thin knot: the top degree of its symmetric Alexander polynomial."""
    return int(delta.degree) if delta else 0


def thin_model(delta, tau_abs: int) -> ThinComplexModel:
    """Thin complex of a knot from its Alexander polynomial and ``|tau|``."""
    return solve_delta_system(thin_alexander_coeffs(delta), tau_abs)


def ck_bound_holds(model: ThinComplexModel, nu: int) -> bool:
    """``g != 1`` and ``nu != g`` must force ``C_K >= 4``."""
    return model.genus == 1 or nu == model.genus or model.C_K >= 4


@dataclass(frozen=True)
class RankProfile:
    """Floer data of a knot, normalized so ``nu >= nu(mirror)`` and ``nu >= 0``.

    Attributes:
        nu: ``max(nu(K), nu(mirror K))``.
        C_K: Total excess rank, or None when unknown.
        genus: Seifert genus.
        mirrored: True when the normalization swapped to the mirror.
    """

    nu: int
    C_K: int | None
    genus: int
    mirrored: bool = False

    def __post_init__(self):
        if self.nu < 0:
            raise ValidationError(f"nu must be non-negative, got {self.nu}")
        if self.nu > self.genus:
            raise ValidationError(f"nu={self.nu} exceeds genus {self.genus}")
        if self.C_K is not None:
            if self.C_K < 0 or self.C_K % 2:
                raise ValidationError(f"C_K must be even and non-negative, got {self.C_K}")
            if self.C_K == 0 and self.genus > 0 and self.nu != self.genus:
                raise ValidationError(f"C_K = 0 forces nu = genus, got nu={self.nu}")

    @classmethod
    def normalized(
        cls, nu: int, nu_mirror: int, c_k: int | None, genus: int
    ) -> RankProfile:
        """Build a profile, swapping to the mirror if ``nu(mirror)`` is larger."""
        if nu_mirror > nu:
            return cls(nu_mirror, c_k, genus, mirrored=True)
        return cls(nu, c_k, genus)

    def _require_ck(self) -> int:
        if self.C_K is None:
            raise ValueError("C_K is unknown for this knot")
        return self.C_K


def hf_rank(profile: RankProfile, slope: Slope) -> int:
    """Rank of ``HF-hat`` of ``m/n`` surgery on a knot with this profile."""
    c = profile._require_ck()
    m, n, nu = slope.m, slope.n, profile.nu
    if n > 0:
        if Fraction(m, n) >= 2 * nu - 1:
            return m + n * c
        return -m + (4 * nu - 2) * n + n * c
    if nu > 0:
        return m - (4 * nu - 2) * n - n * c
    return m - n * c


@dataclass(frozen=True)
class SlopeConstraints:
    """What the rank formula allows for a chirally cosmetic pair.

    Attributes:
        plus_type_allowed: ``C_K == 0``.
        plus_type_min_slope: Both slopes of a +-type pair must be at least this.
        minus_type_rule: ``"n+n'=0"`` when ``nu == 0``, otherwise ``"iv"``
            (the two equalities tying ``(n+n')/m`` to ``nu`` and ``C_K``).
        bound: ``|(n+n')/m|`` must stay below this.
    """

    profile: RankProfile
    plus_type_allowed: bool
    plus_type_min_slope: int
    minus_type_rule: str
    bound: Fraction

    def admits(self, pair: SlopePair, *, include_no_zhs: bool = True) -> bool:
        """Whether a pair of slopes survives every rank constraint.

        Args:
            pair: Slopes with a common numerator ``m``.
            include_no_zhs: Also apply ``|(n+n')/m| < 1`` and ``m > 2`` for
                +- and --type pairs.
        """
        first, second = pair.first, pair.second
        if first.m != second.m:
            raise ValueError(f"slopes {first} and {second} have different numerators")
        if first.value < second.value:
            first, second = second, first
        m, n, n2 = first.m, first.n, second.n
        ratio = Fraction(n + n2, m)
        nu, g, c = self.profile.nu, self.profile.genus, self.profile.C_K
        if first.value <= 0 or first == second:
            return False
        if second.value > 0:
            if not self.plus_type_allowed:
                return False
            if first.value < self.plus_type_min_slope or second.value < self.plus_type_min_slope:
                return False
        elif nu == 0:
            if n + n2 != 0:
                return False
        else:
            if n + n2 <= 0 or c is None:
                return False
            if first.value <= 2 * nu - 1 and ratio != Fraction(2, 4 * nu - 2 + c):
                return False
            if first.value >= 2 * nu - 1:
                if c == 0 or ratio != Fraction((4 * nu - 2) * (-n2), m * c):
                    return False
        if abs(ratio) >= self.bound:
            return False
        if include_no_zhs and pair.type_tag != SurgeryType.ZERO:
            if abs(ratio) >= 1 or m <= 2:
                return False
        return True


def slope_pair_constraints(profile: RankProfile) -> SlopeConstraints:
    """Constraint descriptor for a normalized profile.

    Raises:
        ValueError: If ``C_K`` is unknown.
    """
    c = profile._require_ck()
    g = profile.genus
    if c == 0:
        bound = Fraction(2, 2 * g - 1) if g > 0 else Fraction(2)
    else:
        bound = Fraction(2, c)
    return SlopeConstraints(
        profile=profile,
        plus_type_allowed=c == 0,
        plus_type_min_slope=2 * g - 1,
        minus_type_rule="n+n'=0" if profile.nu == 0 else "iv",
        bound=bound,
    )


def enumerate_admissible_pairs(
    profile: RankProfile,
    max_m: int,
    max_n: int | None = None,
    *,
    include_no_zhs: bool = True,
) -> list[SlopePair]:
    """All slope pairs ``m/n > m/n'`` with ``m <= max_m`` and ``|n|, |n'| <= max_n``
    that the rank constraints admit."""
    max_n = max_m if max_n is None else max_n
    constraints = slope_pair_constraints(profile)
    out = []
    for m in range(1, max_m + 1):
        slopes = sorted(
            {normalize_slope(m, n) for n in range(-max_n, max_n + 1) if n},
            key=lambda s: s.value,
        )
        slopes = [s for s in slopes if s.m == m]
        for i, low in enumerate(slopes):
            for high in slopes[i + 1 :]:
                pair = classify_slope_pair(high, low)
                if constraints.admits(pair, include_no_zhs=include_no_zhs):
                    out.append(pair)
    return out
