"""Pytest configuration and shared fixtures for the cosmic test suite.

This module provides fixture diagrams, reference polynomials and assertion
helpers shared by all tests.
"""

from fractions import Fraction

import pytest

from cosmic.algebra import LaurentPoly
from cosmic.knot_model import KnotDiagram, compact_labels, mirror, parse_pd

# PD codes as published in the standard knot tables; 3_1 and 5_1 are the
# left-handed torus knots there.
PD_CODES = {
    "3_1": "X[1,4,2,5], X[3,6,4,1], X[5,2,6,3]",
    "4_1": "X[4,2,5,1], X[8,6,1,5], X[6,3,7,4], X[2,7,3,8]",
    "5_1": "X[1,6,2,7], X[3,8,4,9], X[5,10,6,1], X[7,2,8,3], X[9,4,10,5]",
    "5_2": "X[1,4,2,5], X[3,8,4,9], X[5,10,6,1], X[9,6,10,7], X[7,2,8,3]",
    "6_1": "X[1,4,2,5], X[7,10,8,11], X[3,9,4,8], X[9,3,10,2], X[5,12,6,1], X[11,6,12,7]",
    "6_2": "X[1,4,2,5], X[5,10,6,11], X[3,9,4,8], X[9,3,10,2], X[7,12,8,1], X[11,6,12,7]",
    "6_3": "X[4,2,5,1], X[8,4,9,3], X[12,9,1,10], X[10,5,11,6], X[6,11,7,12], X[2,8,3,7]",
}

# Jones polynomials {power: coefficient}, each correct up to t -> 1/t.
JONES = {
    "4_1": {-2: 1, -1: -1, 0: 1, 1: -1, 2: 1},
    "5_1": {-7: -1, -6: 1, -5: -1, -4: 1, -2: 1},
    "5_2": {-6: -1, -5: 1, -4: -1, -3: 2, -2: -1, -1: 1},
    "6_1": {-4: 1, -3: -1, -2: 1, -1: -2, 0: 2, 1: -1, 2: 1},
    "6_2": {-1: 1, 0: -1, 1: 2, 2: -2, 3: 2, 4: -2, 5: 1},
    "6_3": {-3: -1, -2: 2, -1: -2, 0: 3, 1: -2, 2: 2, 3: -1},
}

# (determinant, |signature|, genus)
CLASSICAL = {
    "3_1": (3, 2, 1),
    "4_1": (5, 0, 1),
    "5_1": (5, 4, 2),
    "5_2": (7, 2, 1),
    "6_1": (9, 0, 1),
    "6_2": (11, 2, 2),
    "6_3": (13, 0, 2),
}

CONWAY = {
    "3_1": {0: 1, 2: 1},
    "4_1": {0: 1, 2: -1},
    "5_1": {0: 1, 2: 3, 4: 1},
    "5_2": {0: 1, 2: 2},
    "6_1": {0: 1, 2: -2},
    "6_2": {0: 1, 2: -1, 4: -1},
    "6_3": {0: 1, 2: 1, 4: 1},
}


def torus_2_braid(p: int) -> KnotDiagram:
    """Closure of the braid ``sigma_1^p`` on two strands, p odd and positive.

    Every crossing comes out positive, so this is the right-handed T(2, p).
    """
    n = 2 * p
    crossings = []
    for k in range(p):
        a, b = 2 * k + 1, 2 * k + 2
        na, nb = (a + 2 - 1) % n + 1, (b + 2 - 1) % n + 1
        # under strand a -> nb, over strand b -> na entering at slot 3
        crossings.append((a, na, nb, b))
    return KnotDiagram(tuple(crossings))


def braid_closure(word: list[int], strands: int | None = None) -> KnotDiagram:
    """Closure of a braid word; ``i`` is ``sigma_i`` and ``-i`` its inverse.

    Strands run upwards and ``sigma_i`` crosses strand i over strand i + 1,
    which makes it a positive crossing, as in :func:`torus_2_braid`.
    """
    strands = strands or max(abs(g) for g in word) + 1
    current = list(range(1, strands + 1))
    fresh = strands
    crossings = []
    for g in word:
        i = abs(g) - 1
        a_in, b_in = current[i], current[i + 1]
        b_out, a_out = fresh + 1, fresh + 2
        fresh += 2
        # a runs bottom left to top right, b bottom right to top left
        if g > 0:
            crossings.append((b_in, a_out, b_out, a_in))
        else:
            crossings.append((a_in, b_in, a_out, b_out))
        current[i], current[i + 1] = b_out, a_out
    closing = {end: start for end, start in zip(current, range(1, strands + 1))}
    crossings = [tuple(closing.get(v, v) for v in x) for x in crossings]
    return KnotDiagram(compact_labels(crossings))


@pytest.fixture
def diagram():
    """Provide a loader for the fixture diagrams by knot name.

    Returns:
        Callable: Function mapping a name such as ``"5_2"`` to its diagram.
    """

    def _load(name: str) -> KnotDiagram:
        return parse_pd(PD_CODES[name])

    return _load


@pytest.fixture
def right_trefoil() -> KnotDiagram:
    """The right-handed trefoil, mirror of the tabulated 3_1."""
    return mirror(parse_pd(PD_CODES["3_1"]))


@pytest.fixture
def left_trefoil() -> KnotDiagram:
    return parse_pd(PD_CODES["3_1"])


@pytest.fixture
def figure_eight() -> KnotDiagram:
    return parse_pd(PD_CODES["4_1"])


@pytest.fixture
def table_csv(tmp_path):
    """Provide a writer for small knot tables.

    Returns:
        Callable: Function taking CSV body lines and returning the file path.
    """
    header = (
        "name,pd_code,crossings,alternating,quasi_alternating,amphicheiral,"
        "torus_p,torus_q,genus,signature,nu,nu_mirror"
    )

    def _write(*lines: str, name: str = "knots.csv"):
        path = tmp_path / name
        path.write_text("\n".join((header, *lines)) + "\n", encoding="utf-8")
        return path

    return _write


class KnotTestHelper:
    """Helper class providing common assertions on knot invariants."""

    @staticmethod
    def poly(powers: dict[int, int]) -> LaurentPoly:
        return LaurentPoly.from_powers(powers)

    @staticmethod
    def assert_up_to_mirror(actual: LaurentPoly, powers: dict[int, int], name: str = ""):
        """Assert ``actual`` equals the expected polynomial or its image under t -> 1/t.

        Args:
            actual: Computed polynomial.
            powers: Expected polynomial as ``{power: coefficient}``.
            name: Optional knot name for the error message.
        """
        expected = LaurentPoly.from_powers(powers)
        assert actual in (expected, expected.substitute_inverse()), (
            f"{name or 'knot'}: got {actual}, expected {expected} up to mirror"
        )

    @staticmethod
    def assert_up_to_sign(actual: LaurentPoly, powers: dict[int, int], name: str = ""):
        expected = LaurentPoly.from_powers(powers)
        assert actual in (expected, -expected), (
            f"{name or 'knot'}: got {actual}, expected {expected} up to sign"
        )

    @staticmethod
    def assert_fraction(actual, expected, msg: str = ""):
        """Assert an exact rational value."""
        expected = Fraction(expected)
        assert Fraction(actual) == expected, f"{msg}: got {actual}, expected {expected}"


@pytest.fixture
def helper():
    """Provide KnotTestHelper instance for tests.

    Returns:
        KnotTestHelper: Helper class with assertion utilities.
    """
    return KnotTestHelper()


def pytest_configure(config):
    """Configure pytest with custom markers."""
    config.addinivalue_line(
        "markers", "slow: marks tests as slow (deselect with '-m \"not slow\"')"
    )
    config.addinivalue_line("markers", "integration: marks tests as integration tests")
    config.addinivalue_line("markers", "parametrize: marks parametrized tests")
