"""Heegaard Floer rank tests.

Tests for C_K of thin knots, the delta system of a staircase complex, the
rank of HF of rational surgeries and the slope-pair constraints.
"""

import math
from fractions import Fraction

import pytest

from conftest import CLASSICAL, PD_CODES
from cosmic.errors import InconsistentSystem, NotThinConsistent, ValidationError
from cosmic.floer import (
    RankProfile,
    ThinComplexModel,
    ck_bound_holds,
    ck_thin,
    enumerate_admissible_pairs,
    genus_from_alexander,
    hf_rank,
    slope_pair_constraints,
    solve_delta_system,
    thin_alexander_coeffs,
    thin_model,
)
from cosmic.knot_model import Slope, SlopePair, SurgeryType, classify_slope_pair
from cosmic.seifert import alexander_conway, seifert_matrix

EXPECTED_CK = {"3_1": 0, "4_1": 2, "5_1": 0, "5_2": 2, "6_1": 4, "6_2": 4, "6_3": 6}
NU = {"3_1": 1, "4_1": 0, "5_1": 2, "5_2": 1, "6_1": 0, "6_2": 1, "6_3": 0}


def _pair(first: str, second: str) -> SlopePair:
    return classify_slope_pair(Slope.parse(first), Slope.parse(second))


def _profiles(max_genus: int = 3):
    for genus in range(1, max_genus + 1):
        for nu in range(genus + 1):
            for c in (0, 2, 4, 6):
                if c == 0 and nu != genus:
                    continue
                yield RankProfile(nu, c, genus)


class TestThinCK:
    """Test C_K of homologically thin knots."""

    @pytest.mark.parametrize("name", sorted(EXPECTED_CK))
    def test_from_determinant(self, name):
        """Test (|det| - 2|tau| - 1)/2 on the fixture knots."""
        det, sigma, _ = CLASSICAL[name]
        assert ck_thin(det, sigma // 2) == EXPECTED_CK[name]

    @pytest.mark.parametrize("name", sorted(EXPECTED_CK))
    def test_delta_system_agrees(self, name, diagram):
        """Test the staircase model gives the same C_K."""
        delta, _ = alexander_conway(seifert_matrix(diagram(name)))
        model = thin_model(delta, CLASSICAL[name][1] // 2)
        assert model.C_K == EXPECTED_CK[name]
        assert model.genus == CLASSICAL[name][2]
        assert genus_from_alexander(delta) == CLASSICAL[name][2]

    @pytest.mark.parametrize("name", sorted(PD_CODES))
    def test_ck_bound_on_fixtures(self, name, diagram):
        """Test C_K >= 4 whenever g != 1 and nu != g."""
        delta, _ = alexander_conway(seifert_matrix(diagram(name)))
        model = thin_model(delta, CLASSICAL[name][1] // 2)
        assert ck_bound_holds(model, NU[name])

    def test_odd(self):
        """Test an odd C_K is rejected."""
        with pytest.raises(NotThinConsistent, match="not a non-negative even integer"):
            ck_thin(7, 0)

    def test_negative(self):
        """Test a negative C_K is rejected."""
        with pytest.raises(NotThinConsistent):
            ck_thin(3, 2)


class TestDeltaSystem:
    """Test the box counts of a staircase complex."""

    def test_six_two(self):
        """Test delta_1 = 0 and delta_2 = 1 for |d| = (3, 3, 1), |tau| = 1."""
        model = solve_delta_system([3, 3, 1], 1)
        assert model.delta == (0, 1)
        assert model.epsilon == (1, 1, 0)
        assert model.C_K == 4

    def test_six_three(self):
        """Test |d| = (5, 3, 1), |tau| = 0."""
        model = solve_delta_system([5, 3, 1], 0)
        assert model.delta == (1, 1)
        assert model.C_K == 6

    def test_unknot(self):
        """Test the trivial complex."""
        model = solve_delta_system([1], 0)
        assert model.delta == ()
        assert model.C_K == 0

    def test_negative_delta(self):
        """Test a negative box count is inconsistent."""
        with pytest.raises(InconsistentSystem, match="delta_1 = -5 < 0"):
            solve_delta_system([1, 1, 3], 0)

    def test_constant_term_mismatch(self):
        """Test the d_0 equation is checked."""
        with pytest.raises(InconsistentSystem, match="does not match"):
            solve_delta_system([1, 5, 1], 0)

    def test_non_alternating_coefficients(self, helper):
        """Test coefficients of a thin knot alternate in sign."""
        with pytest.raises(NotThinConsistent, match="do not alternate"):
            thin_alexander_coeffs(helper.poly({-1: 1, 0: 1, 1: 1}))

    def test_absolute_coefficients(self, helper):
        """Test |d_0|, ..., |d_g| of 6_2."""
        delta = helper.poly({-2: -1, -1: 3, 0: -3, 1: 3, 2: -1})
        assert thin_alexander_coeffs(delta) == [3, 3, 1]

    def test_ck_bound_can_fail(self):
        """Test the C_K bound check reports a small C_K."""
        model = ThinComplexModel(2, 0, (1, 1, 1), (1, 0, 0), (1, 0))
        assert model.C_K == 2
        assert not ck_bound_holds(model, 0)
        assert ck_bound_holds(model, 2)


class TestRankProfile:
    """Test profile validation and normalization."""

    @pytest.mark.parametrize(
        "nu,c,genus,message",
        [
            (-1, 0, 1, "non-negative"),
            (2, 4, 1, "exceeds genus"),
            (0, 3, 1, "even"),
            (0, 0, 1, "forces nu = genus"),
        ],
    )
    def test_invalid(self, nu, c, genus, message):
        """Test inconsistent Floer data is rejected."""
        with pytest.raises(ValidationError, match=message):
            RankProfile(nu, c, genus)

    def test_normalized_swaps_to_mirror(self):
        """Test the larger nu is kept."""
        profile = RankProfile.normalized(0, 1, 0, 1)
        assert profile.nu == 1
        assert profile.mirrored

    def test_normalized_keeps_knot(self):
        """Test no swap when nu(K) is already the larger."""
        profile = RankProfile.normalized(1, 0, 4, 2)
        assert not profile.mirrored


class TestHFRank:
    """Test the rank of HF of m/n surgery."""

    def test_lens_space_surgery(self):
        """Test large surgery on the trefoil profile is an L-space."""
        profile = RankProfile(1, 0, 1)
        assert hf_rank(profile, Slope(5, 1)) == 5

    def test_small_positive_slope(self):
        """Test the branch below 2 nu - 1."""
        profile = RankProfile(1, 0, 1)
        assert hf_rank(profile, Slope(1, 2)) == 3

    def test_negative_slope(self):
        """Test n < 0 with nu > 0."""
        profile = RankProfile(1, 0, 1)
        assert hf_rank(profile, Slope(5, -1)) == 7

    def test_nu_zero(self):
        """Test nu = 0 adds |n| C_K on both sides."""
        profile = RankProfile(0, 2, 1)
        assert hf_rank(profile, Slope(5, 2)) == 9
        assert hf_rank(profile, Slope(5, -2)) == 9

    def test_branches_meet(self):
        """Test both branches agree at m/n = 2 nu - 1."""
        profile = RankProfile(2, 4, 3)
        m, n, nu, c = 3, 1, 2, 4
        assert hf_rank(profile, Slope(m, n)) == m + n * c == -m + (4 * nu - 2) * n + n * c

    def test_lower_bound_and_parity(self):
        """Test rank >= m and rank = m mod 2 over a slope grid."""
        for profile in _profiles():
            for m in range(1, 9):
                for n in range(-6, 7):
                    if n == 0 or math.gcd(m, n) != 1:
                        continue
                    rank = hf_rank(profile, Slope(m, n))
                    assert rank >= m
                    assert (rank - m) % 2 == 0

    def test_unknown_ck(self):
        """Test C_K is required."""
        with pytest.raises(ValueError, match="C_K is unknown"):
            hf_rank(RankProfile(0, None, 1), Slope(1, 1))


class TestSlopeConstraints:
    """Test which slope pairs the rank formula admits."""

    def test_trefoil_profile(self):
        """Test C_K = 0 allows +-type pairs above 2g - 1."""
        c = slope_pair_constraints(RankProfile(1, 0, 1))
        assert c.plus_type_allowed
        assert c.plus_type_min_slope == 1
        assert c.minus_type_rule == "iv"
        assert c.bound == 2

    def test_thick_profile(self):
        """Test C_K > 0 forbids +-type pairs and bounds by 2/C_K."""
        c = slope_pair_constraints(RankProfile(1, 4, 2))
        assert not c.plus_type_allowed
        assert c.bound == Fraction(1, 2)
        assert not c.admits(_pair("5", "5/2"))

    def test_nu_zero_rule(self):
        """Test nu = 0 forces n + n' = 0."""
        c = slope_pair_constraints(RankProfile(0, 2, 1))
        assert c.minus_type_rule == "n+n'=0"
        assert c.admits(_pair("5", "-5"))
        assert not c.admits(_pair("5/2", "-5/3"))

    def test_plus_pair_on_trefoil_profile(self):
        """Test an admissible +-type pair."""
        c = slope_pair_constraints(RankProfile(1, 0, 1))
        assert c.admits(_pair("5", "5/2"))
        assert c.admits(_pair("5/2", "5"))
        assert not c.admits(_pair("5", "5"))

    def test_no_zhs_clause(self):
        """Test |(n + n')/m| < 1 is applied only on request."""
        c = slope_pair_constraints(RankProfile(1, 0, 1))
        pair = _pair("3/4", "-3")
        assert pair.type_tag == SurgeryType.MINUS
        assert c.admits(pair, include_no_zhs=False)
        assert not c.admits(pair)

    def test_different_numerators(self):
        """Test slopes must share m."""
        c = slope_pair_constraints(RankProfile(1, 0, 1))
        with pytest.raises(ValueError, match="different numerators"):
            c.admits(SlopePair(Slope(5, 1), Slope(3, 1), SurgeryType.PLUS))

    def test_sweep_no_zhs_is_implied(self):
        """Test the rank constraints already force |(n + n')/m| < 1 and m > 2.

        Every profile except genus one with C_K = 0 is swept.
        """
        for profile in _profiles():
            if profile.genus == 1 and profile.C_K == 0:
                continue
            loose = enumerate_admissible_pairs(profile, 12, include_no_zhs=False)
            for pair in loose:
                m = pair.first.m
                ratio = Fraction(pair.first.n + pair.second.n, m)
                assert abs(ratio) < 1, (profile, pair)
                assert pair.type_tag == SurgeryType.ZERO or m > 2, (profile, pair)
            assert loose == enumerate_admissible_pairs(profile, 12), profile

    def test_enumeration_is_ordered(self):
        """Test pairs come out with the larger slope first."""
        for pair in enumerate_admissible_pairs(RankProfile(0, 2, 1), 6):
            assert pair.first.value > pair.second.value
            assert pair.type_tag == SurgeryType.ZERO
