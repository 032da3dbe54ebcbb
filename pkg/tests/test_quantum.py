"""Quantum SO(3) invariant tests.

Tests for quantum integers, the constants c_+ and c_-, continued fractions,
the surgery coefficient vector and the 0-type obstruction.
"""

import json

import pytest

from cosmic.algebra import CyclotomicElement, cyclotomic_root
from cosmic.errors import MissingColor, ParseError
from cosmic.knot_model import Slope
from cosmic.quantum import (
    ColoredJonesVector,
    ContinuedFraction,
    ZeroTypeVerdict,
    c_plus_minus,
    coefficient_vector,
    color_index,
    colored_jones_vector,
    continued_fraction,
    continued_fraction_value,
    lens_space_tau,
    linking_matrix,
    load_colored_jones,
    quantum_integer,
    tau_so3_surgery,
    unnormalized_coefficients,
    zero_type_obstruction,
    zero_type_obstruction_cleared,
)
from cosmic.skein import jones

SLOPES = [Slope(1, 1), Slope(2, 1), Slope(1, 2), Slope(7, 2), Slope(5, 3), Slope(3, -2)]


class TestQuantumIntegers:
    """Test [n] at q = zeta_r."""

    def test_one_and_r(self):
        """Test [1] = 1 and [r] = 0."""
        assert quantum_integer(1, 5) == 1
        assert quantum_integer(5, 5).is_zero()
        assert quantum_integer(0, 5).is_zero()

    def test_golden_ratio(self):
        """Test [2] = 2 cos(pi/5) solves x^2 - x - 1 = 0 at r = 5."""
        two = quantum_integer(2, 5)
        assert (two * two - two - 1).is_zero()

    def test_symmetries(self):
        """Test [2r - n] = -[n], [r - n] = [n] and [-n] = -[n]."""
        assert quantum_integer(7, 5) == -quantum_integer(3, 5)
        assert quantum_integer(3, 5) == quantum_integer(2, 5)
        assert quantum_integer(-2, 5) == -quantum_integer(2, 5)
        assert quantum_integer(12, 5) == quantum_integer(2, 5)

    def test_real(self):
        """Test quantum integers are real."""
        for n in range(1, 7):
            assert quantum_integer(n, 7).is_real()

    @pytest.mark.parametrize("r", [1, 4, 6])
    def test_bad_level(self, r):
        """Test r must be odd and at least 3."""
        with pytest.raises(ValueError, match="odd integer >= 3"):
            quantum_integer(1, r)


class TestConstants:
    """Test c_+ and c_-."""

    @pytest.mark.parametrize("r", [3, 5, 7])
    def test_conjugate_pair(self, r):
        """Test c_- is the complex conjugate of c_+."""
        plus, minus = c_plus_minus(r)
        assert plus.conjugate() == minus
        assert not plus.is_zero()

    def test_level_three(self):
        """Test only color 1 contributes at r = 3."""
        assert c_plus_minus(3) == (1, 1)

    def test_level_five_value(self):
        """Test c_+ = q^2 - q^4 at r = 5."""
        q = cyclotomic_root(10, 2)
        plus, _ = c_plus_minus(5)
        assert plus == q**2 - q**4


class TestContinuedFraction:
    """Test negative continued fractions and chain linking matrices."""

    @pytest.mark.parametrize(
        "value,terms",
        [("7/2", (4, 2)), ("5/3", (2, 3)), ("1", (1,)), ("1/2", (1, 2)), ("-7/2", (-3, 2))],
    )
    def test_canonical(self, value, terms):
        """Test expansion by ceiling division."""
        s = Slope.parse(value)
        cf = continued_fraction(s)
        assert cf.terms == terms
        assert cf.value() == s.value
        assert all(a >= 2 for a in cf.terms[1:])

    def test_other_expansions_evaluate(self):
        """Test non-canonical expansions of the same slopes."""
        assert continued_fraction_value((3, -2)) == continued_fraction_value((4, 2))
        assert continued_fraction_value((1, -1, 2)) == continued_fraction_value((2, 3))

    def test_linking_matrix(self):
        """Test the tridiagonal chain matrix."""
        m = linking_matrix((4, 2, 3))
        assert m.entries == ((4, 1, 0), (1, 2, 1), (0, 1, 3))
        assert ContinuedFraction((4, 2)).length == 1

    def test_empty(self):
        """Test an expansion needs a term."""
        with pytest.raises(ValueError, match="at least one term"):
            ContinuedFraction(())

    def test_color_index(self):
        """Test n(i) is i for odd i and r - i for even i."""
        assert [color_index(i, 7) for i in (1, 2, 3)] == [1, 5, 3]


class TestCoefficientVector:
    """Test the surgery coefficients v(r, m/n)."""

    @pytest.mark.parametrize("s", [Slope(1, 1), Slope(1, -1), Slope(1, 2), Slope(1, -3)])
    @pytest.mark.parametrize("r", [3, 5, 7])
    def test_integral_homology_sphere(self, r, s):
        """Test 1/n surgery on the unknot gives tau(S^3) = 1."""
        assert lens_space_tau(r, s) == 1

    @pytest.mark.parametrize(
        "slope,other",
        [(Slope(7, 2), (3, -2)), (Slope(5, 3), (1, -1, 2)), (Slope(1, 1), (2, 1))],
    )
    def test_expansion_invariance(self, slope, other):
        """Test the coefficients do not depend on the chain presentation."""
        canonical = coefficient_vector(5, slope)
        assert coefficient_vector(5, slope, expansion=ContinuedFraction(other)) == canonical

    @pytest.mark.parametrize("s", SLOPES)
    def test_negation_conjugates(self, s):
        """Test v(r, -m/n) is the conjugate of v(r, m/n)."""
        assert coefficient_vector(5, s.negated()) == coefficient_vector(5, s).conjugate()

    @pytest.mark.parametrize("r", [5, 7])
    @pytest.mark.parametrize("s", [Slope(7, 2), Slope(5, 3), Slope(1, 3)])
    def test_brute_matches_transfer(self, r, s):
        """Test the transfer-matrix chain sum against the brute-force one."""
        brute = coefficient_vector(r, s, method="brute")
        assert brute == coefficient_vector(r, s, method="transfer")

    def test_signature_of_chain(self):
        """Test sigma_+ and sigma_- of the chain matrix."""
        _, signs = unnormalized_coefficients(5, Slope(7, 2))
        assert signs == (2, 0)
        _, signs = unnormalized_coefficients(
            5, Slope(7, 2), expansion=ContinuedFraction((3, -2))
        )
        assert signs == (1, 1)

    def test_wrong_expansion(self):
        """Test an expansion of another slope is rejected."""
        with pytest.raises(ValueError, match="does not evaluate to 7/2"):
            coefficient_vector(5, Slope(7, 2), expansion=ContinuedFraction((2, 3)))

    def test_unknown_method(self):
        """Test only transfer and brute are known."""
        with pytest.raises(ValueError, match="method must be one of"):
            coefficient_vector(5, Slope(7, 2), method="fast")

    def test_length(self):
        """Test one coefficient per color 1..(r-1)/2."""
        assert len(coefficient_vector(7, Slope(5, 3)).entries) == 3


class TestColoredJones:
    """Test colored Jones vectors built from the Jones polynomial."""

    def test_unknot(self, helper):
        """Test V = 1 gives Q_i = [i]."""
        assert colored_jones_vector(5, helper.poly({0: 1})) == ColoredJonesVector.unknot(5)

    def test_level_three(self, right_trefoil):
        """Test r = 3 uses color 1 only."""
        assert colored_jones_vector(3, jones(right_trefoil)).entries == (1,)

    def test_missing_color(self, right_trefoil):
        """Test r = 7 needs the third color."""
        with pytest.raises(MissingColor, match="colors 3..3"):
            colored_jones_vector(7, jones(right_trefoil))

    def test_extra_colors(self, right_trefoil):
        """Test supplied colors are appended."""
        third = CyclotomicElement.one(14)
        values = colored_jones_vector(7, jones(right_trefoil), (third,))
        assert values.entries[2] == third

    def test_surgery_on_unknot_is_lens_space(self):
        """Test tau_r on the unknot vector matches the lens space value."""
        unknot = ColoredJonesVector.unknot(5)
        for s in SLOPES:
            assert tau_so3_surgery(5, unknot, s) == lens_space_tau(5, s)

    def test_level_mismatch(self):
        """Test the colored Jones vector must match r."""
        with pytest.raises(ValueError, match="not 5"):
            tau_so3_surgery(5, ColoredJonesVector.unknot(7), Slope(1, 1))


class TestZeroTypeObstruction:
    """Test the SO(3) obstruction to m/n versus -m/n."""

    def test_trefoil_obstructed(self, right_trefoil):
        """Test V(zeta_5) is not real for the trefoil, so slope 1 is obstructed."""
        v = jones(right_trefoil)
        assert zero_type_obstruction(5, v, Slope(1, 1)) == ZeroTypeVerdict.OBSTRUCTED

    @pytest.mark.parametrize("s", SLOPES)
    def test_amphicheiral_not_obstructed(self, s, figure_eight):
        """Test a real colored Jones vector never obstructs."""
        v = jones(figure_eight)
        assert zero_type_obstruction(5, v, s) == ZeroTypeVerdict.NOT_OBSTRUCTED

    @pytest.mark.parametrize("name", ["3_1", "5_2", "6_2"])
    @pytest.mark.parametrize("s", SLOPES)
    def test_cleared_agrees(self, name, s, diagram):
        """Test the decision without inverting c_+- is the same."""
        v = jones(diagram(name))
        assert zero_type_obstruction_cleared(5, v, s) == zero_type_obstruction(5, v, s)

    def test_level_seven_needs_values(self, right_trefoil):
        """Test r = 7 without supplied values raises MissingColor."""
        with pytest.raises(MissingColor):
            zero_type_obstruction(7, jones(right_trefoil), Slope(1, 1))

    def test_supplied_wrong_level(self, right_trefoil):
        """Test supplied values must cover the level."""
        with pytest.raises(MissingColor, match="do not cover r=7"):
            zero_type_obstruction(
                7, jones(right_trefoil), Slope(1, 1), supplied=ColoredJonesVector.unknot(5)
            )

    def test_supplied_unknot_values(self, right_trefoil):
        """Test a real supplied vector is not obstructed."""
        verdict = zero_type_obstruction(
            7, jones(right_trefoil), Slope(7, 2), supplied=ColoredJonesVector.unknot(7)
        )
        assert verdict == ZeroTypeVerdict.NOT_OBSTRUCTED


class TestLoadColoredJones:
    """Test reading supplied colored Jones values."""

    def test_load_list(self, tmp_path):
        """Test a list of entries with fraction strings."""
        path = tmp_path / "cj.json"
        path.write_text(
            json.dumps([{"knot": "3_1", "r": 7, "colors": [[1], [0, 1], ["1/2"]]}]),
            encoding="utf-8",
        )
        values = load_colored_jones(path)["3_1"]
        assert values.r == 7
        assert values.entries[1] == cyclotomic_root(14, 1)
        assert values.entries[2] * 2 == 1

    def test_load_single_object(self, tmp_path):
        """Test a bare object is accepted."""
        path = tmp_path / "cj.json"
        path.write_text(json.dumps({"knot": "k", "r": 5, "colors": [[1], [1]]}), encoding="utf-8")
        assert set(load_colored_jones(path)) == {"k"}

    def test_bad_json(self, tmp_path):
        """Test malformed JSON."""
        path = tmp_path / "cj.json"
        path.write_text("{not json", encoding="utf-8")
        with pytest.raises(ParseError):
            load_colored_jones(path)

    def test_missing_key(self, tmp_path):
        """Test entries need r and colors."""
        path = tmp_path / "cj.json"
        path.write_text(json.dumps({"knot": "k", "colors": [[1]]}), encoding="utf-8")
        with pytest.raises(ParseError, match="bad colored Jones entry"):
            load_colored_jones(path)
