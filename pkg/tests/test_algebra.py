"""Exact arithmetic tests.

Tests for Laurent polynomials, truncated series, cyclotomic elements and
the signature of symmetric integer matrices.
"""

from fractions import Fraction

import pytest

from cosmic.algebra import (
    ComplexSeries,
    CyclotomicElement,
    LaurentPoly,
    LaurentPoly2,
    SymIntMatrix,
    TruncatedSeries,
    char_poly_sign_counts,
    cyclotomic_invert,
    cyclotomic_root,
    exp_series,
    matrix_signature,
    series_compose,
)
from cosmic.errors import NonRealResult, ValidationError

t = LaurentPoly.monomial(1, 1)


class TestLaurentPolyArithmetic:
    """Test one-variable Laurent polynomial arithmetic."""

    def test_square_of_binomial(self):
        """Test (t + 1)^2 expands correctly."""
        assert (t + 1) ** 2 == LaurentPoly.from_powers({2: 1, 1: 2, 0: 1})

    def test_zero_terms_are_dropped(self):
        """Test cancelling terms leave the zero polynomial."""
        p = t - t
        assert p.is_zero()
        assert not p
        assert p == 0

    def test_negative_power_of_unit_monomial(self):
        """Test negative powers of t and -t."""
        assert t**-2 == LaurentPoly.from_powers({-2: 1})
        assert (-t) ** -3 == LaurentPoly.from_powers({-3: -1})

    def test_negative_power_of_binomial_rejected(self):
        """Test negative powers need a unit monomial."""
        with pytest.raises(ValueError, match="unit monomials"):
            (t + 1) ** -1

    def test_half_integer_monomial(self):
        """Test half-integer exponents are kept doubled."""
        half = LaurentPoly.monomial(1, Fraction(1, 2))
        assert half * half == t
        assert half.terms == {1: 1}
        assert not half.has_integer_powers()

    def test_quarter_power_rejected(self):
        """Test powers must be multiples of 1/2."""
        with pytest.raises(ValueError, match="multiple of 1/2"):
            LaurentPoly.monomial(1, Fraction(1, 4))

    def test_degrees(self):
        """Test top and bottom degrees."""
        p = LaurentPoly.from_powers({-3: 2, 5: -1})
        assert p.degree == 5
        assert p.min_degree == -3


class TestLaurentPolyTransforms:
    """Test substitutions, evaluation and normalization."""

    def test_substitute_inverse(self):
        """Test t -> 1/t."""
        p = LaurentPoly.from_powers({4: -1, 3: 1, 1: 1})
        assert p.substitute_inverse() == LaurentPoly.from_powers({-4: -1, -3: 1, -1: 1})

    def test_shift(self):
        """Test multiplication by a power of t."""
        assert (t + 1).shift(-1) == 1 + t**-1

    def test_symmetrize_centres_powers(self):
        """Test symmetrize centres the powers on zero."""
        p = LaurentPoly.from_powers({0: 1, 1: -1, 2: 1})
        assert p.symmetrize() == LaurentPoly.from_powers({-1: 1, 0: -1, 1: 1})

    def test_symmetrize_fixes_sign(self):
        """Test symmetrize makes the value at 1 positive."""
        p = LaurentPoly.from_powers({0: -1, 1: 1, 2: -1})
        assert p.symmetrize() == LaurentPoly.from_powers({-1: 1, 0: -1, 1: 1})

    def test_evaluate(self):
        """Test exact rational evaluation."""
        assert (t**2 - 1).evaluate(3) == 8
        assert LaurentPoly.from_powers({-1: 1}).evaluate(2) == Fraction(1, 2)

    def test_evaluate_at_zero_with_negative_power(self):
        """Test evaluating a negative power at zero fails."""
        with pytest.raises(ZeroDivisionError):
            LaurentPoly.from_powers({-1: 1}).evaluate(0)

    def test_powers_rejects_half_integers(self):
        """Test integer power view of a half-integer polynomial."""
        with pytest.raises(ValueError, match="half-integer"):
            LaurentPoly.monomial(1, Fraction(1, 2)).powers()

    def test_derivative(self):
        """Test formal derivative."""
        p = LaurentPoly.from_powers({2: 1, -1: 1})
        assert p.derivative() == LaurentPoly.from_powers({1: 2, -2: -1})

    def test_evaluate_root(self):
        """Test t maps to zeta^2 when t^(1/2) is zeta."""
        assert t.evaluate_root(10, 1) == cyclotomic_root(10, 2)


class TestLaurentPolyFormatting:
    """Test text and JSON forms."""

    def test_format_jones_of_trefoil(self):
        """Test the printed form of a Jones polynomial."""
        assert str(-(t**4) + t**3 + t) == "-t^4 + t^3 + t"

    def test_format_negative_and_half_powers(self):
        """Test negative and half-integer exponents in text."""
        assert LaurentPoly.monomial(3, -2).format() == "3*t^-2"
        assert LaurentPoly.monomial(-1, Fraction(1, 2)).format() == "-t^(1/2)"

    def test_format_other_variable(self):
        """Test formatting with a different variable name."""
        assert LaurentPoly.from_powers({2: 1, 0: 1}).format("z") == "z^2 + 1"

    def test_format_zero(self):
        """Test the zero polynomial prints as 0."""
        assert str(LaurentPoly()) == "0"

    def test_json_roundtrip(self):
        """Test JSON form restores the polynomial."""
        p = LaurentPoly.from_powers({-3: -1, 0: 2, 4: 5})
        assert LaurentPoly.from_json(p.to_json()) == p


class TestLaurentPoly2:
    """Test two-variable polynomials."""

    def test_mirror(self):
        """Test a -> 1/a."""
        p = LaurentPoly2.monomial(2, 3, 1) + LaurentPoly2.monomial(-1, -1, 0)
        assert p.mirror() == LaurentPoly2.monomial(2, -3, 1) + LaurentPoly2.monomial(-1, 1, 0)

    def test_substitute(self):
        """Test specializing a and z to polynomials in t."""
        p = LaurentPoly2({(1, 0): 1, (0, 2): 1})
        assert p.substitute(t, t + 1) == t + (t + 1) ** 2

    def test_substitute_negative_z_rejected(self):
        """Test negative powers of z cannot be specialized."""
        with pytest.raises(ValueError, match="negative power of z"):
            LaurentPoly2.monomial(1, 0, -1).substitute(t, t)

    def test_scale_a(self):
        """Test multiplication by a power of a."""
        p = LaurentPoly2.monomial(1, 1, 2)
        assert p.scale_a(-1) == LaurentPoly2.monomial(1, 0, 2)

    def test_coefficient_lookup(self):
        """Test coefficient access by exponent pair."""
        p = LaurentPoly2({(1, 2): 7})
        assert p.coefficient(1, 2) == 7
        assert p.coefficient(0, 0) == 0


class TestTruncatedSeries:
    """Test truncated rational power series."""

    def test_exp_inverse(self):
        """Test exp(h) * exp(-h) = 1."""
        assert exp_series(1, 4) * exp_series(-1, 4) == TruncatedSeries.one(4)

    def test_exp_coefficients(self):
        """Test exp(2h) coefficients."""
        assert exp_series(2, 3).coefficients == (1, 2, 2, Fraction(4, 3))

    def test_geometric_inverse(self):
        """Test 1/(1 - h) = 1 + h + h^2 + ..."""
        s = TruncatedSeries(3, (1, -1, 0, 0))
        assert s.inverse().coefficients == (1, 1, 1, 1)

    def test_non_unit_rejected(self):
        """Test a series without constant term has no inverse."""
        with pytest.raises(ZeroDivisionError, match="not a unit"):
            TruncatedSeries(2, (0, 1, 0)).inverse()

    def test_order_mismatch(self):
        """Test series of different orders do not mix."""
        with pytest.raises(ValueError, match="order mismatch"):
            TruncatedSeries.one(2) + TruncatedSeries.one(3)

    def test_wrong_length(self):
        """Test coefficient count must match the order."""
        with pytest.raises(ValueError, match="expected 3 coefficients"):
            TruncatedSeries(2, (1, 2))

    def test_negative_power(self):
        """Test negative powers go through the inverse."""
        s = exp_series(1, 3)
        assert s**-2 == exp_series(-2, 3)


class TestComplexSeries:
    """Test Gaussian-rational series."""

    def test_i_squared(self):
        """Test i * i = -1."""
        i = ComplexSeries.from_imag(TruncatedSeries.one(2))
        assert (i * i).real_part() == TruncatedSeries.constant(-1, 2)

    def test_real_part_rejects_imaginary(self):
        """Test a surviving imaginary part raises NonRealResult."""
        i = ComplexSeries.from_imag(TruncatedSeries.one(2))
        with pytest.raises(NonRealResult, match="imaginary"):
            i.real_part()

    def test_inverse(self):
        """Test (1 + i h)^-1 * (1 + i h) = 1."""
        z = ComplexSeries(TruncatedSeries.one(3), TruncatedSeries(3, (0, 1, 0, 0)))
        assert (z * z.inverse()).real_part() == TruncatedSeries.one(3)

    def test_compose_laurent(self):
        """Test t + 1/t at t = exp(h) is 2 + h^2 + h^4/12."""
        f = t + t**-1
        got = series_compose(f, {"t": exp_series(1, 4)}, 4).real_part()
        assert got.coefficients == (2, 0, 1, 0, Fraction(1, 12))


class TestCyclotomic:
    """Test arithmetic in cyclotomic fields."""

    def test_root_of_unity_order(self):
        """Test zeta_5^5 = 1."""
        assert cyclotomic_root(5, 5) == 1
        assert cyclotomic_root(5, 1) ** 5 == 1

    def test_sum_of_roots_vanishes(self):
        """Test 1 + zeta + ... + zeta^4 = 0."""
        total = sum((cyclotomic_root(5, k) for k in range(5)), CyclotomicElement.zero(5))
        assert total.is_zero()

    def test_half_turn(self):
        """Test zeta_10^5 = -1."""
        assert cyclotomic_root(10, 5) == -1

    def test_invert(self):
        """Test inversion of 1 + zeta."""
        x = 1 + cyclotomic_root(10, 1)
        assert x * cyclotomic_invert(x) == 1
        assert (1 / x) * x == 1

    def test_invert_zero(self):
        """Test zero has no inverse."""
        with pytest.raises(ZeroDivisionError):
            cyclotomic_invert(CyclotomicElement.zero(5))

    def test_conjugate(self):
        """Test conjugation sends zeta to zeta^-1."""
        assert cyclotomic_root(5, 1).conjugate() == cyclotomic_root(5, 4)
        x = cyclotomic_root(10, 1) + cyclotomic_root(10, 9)
        assert x.is_real()

    def test_level_mismatch(self):
        """Test elements of different fields do not mix."""
        with pytest.raises(ValueError, match="level mismatch"):
            cyclotomic_root(5, 1) + cyclotomic_root(10, 1)

    def test_json_roundtrip(self):
        """Test JSON form restores the element."""
        x = cyclotomic_root(10, 3) * Fraction(2, 3) - 1
        assert CyclotomicElement.from_json(x.to_json()) == x


class TestSignature:
    """Test the exact inertia of symmetric matrices."""

    @pytest.mark.parametrize(
        "rows,expected",
        [
            ([[0, 1], [1, 0]], (1, 1, 0)),
            ([[2, 1], [1, 2]], (2, 0, 0)),
            ([[1, 2], [2, 1]], (1, 1, 0)),
            ([[0, 0], [0, 0]], (0, 0, 2)),
            ([[-2, 1, 0], [1, -2, 1], [0, 1, -2]], (0, 3, 0)),
            ([[1, 1], [1, 1]], (1, 0, 1)),
        ],
    )
    def test_signature(self, rows, expected):
        """Test elimination against known inertia."""
        assert matrix_signature(SymIntMatrix.from_rows(rows)) == expected

    @pytest.mark.parametrize(
        "rows",
        [
            [[0, 1, 0], [1, 0, 1], [0, 1, 0]],
            [[4, -2, 1], [-2, 0, 3], [1, 3, -1]],
            [[0, 2, 0, 0], [2, 0, 1, 0], [0, 1, 0, 1], [0, 0, 1, 2]],
        ],
    )
    def test_matches_characteristic_polynomial(self, rows):
        """Test elimination agrees with Sturm root counting."""
        m = SymIntMatrix.from_rows(rows)
        assert matrix_signature(m) == char_poly_sign_counts(m)

    def test_empty_matrix(self):
        """Test the empty matrix has trivial inertia."""
        m = SymIntMatrix.from_rows([])
        assert matrix_signature(m) == (0, 0, 0)
        assert char_poly_sign_counts(m) == (0, 0, 0)

    def test_not_symmetric(self):
        """Test asymmetric input is rejected."""
        with pytest.raises(ValidationError, match="not symmetric"):
            SymIntMatrix.from_rows([[0, 1], [2, 0]])

    def test_ragged(self):
        """Test non-square input is rejected."""
        with pytest.raises(ValidationError, match="row 1 has length 1"):
            SymIntMatrix.from_rows([[0, 1], [1]])
