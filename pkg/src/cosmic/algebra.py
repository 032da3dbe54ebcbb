"""Exact arithmetic substrate for cosmic.

This module provides the exact value types every invariant is computed with:
Laurent polynomials in one and two variables, truncated power series (real and
Gaussian-rational), elements of cyclotomic fields and symmetric integer
matrices with an exact signature routine.

Rationals are :class:`fractions.Fraction`. Cyclotomic moduli and field
inversion come from sympy; everything else is plain integer arithmetic so that
values stay cheap to hash and to pickle across worker processes.

Example:
    >>> t = LaurentPoly.monomial(1, 1)
    >>> str(-t**4 + t**3 + t)
    '-t^4 + t^3 + t'
"""

from __future__ import annotations

import math
from collections.abc import Iterator, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import sympy

from .errors import NonRealResult, ValidationError

Rational = Fraction

Number = int | Fraction


def _format_term(coeff: Number, body: str, first: bool) -> str:
    sign = "-" if coeff < 0 else "+"
    mag = abs(coeff)
    if body:
        text = body if mag == 1 else f"{mag}*{body}"
    else:
        text = str(mag)
    if first:
        return f"-{text}" if sign == "-" else text
    return f" {sign} {text}"


def _format_power(var: str, doubled: int) -> str:
    if doubled == 0:
        return ""
    if doubled % 2:
        return f"{var}^({doubled}/2)"
    power = doubled // 2
    return var if power == 1 else f"{var}^{power}"


class LaurentPoly:
    """Integer Laurent polynomial in one variable with half-integer powers.

    Exponents are stored doubled, so ``t^(1/2)`` has key 1 and ``t^-2`` has
    key -4. Zero coefficients are never stored.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, int] | None = None):
        self._terms: dict[int, int] = {
            int(e): int(c) for e, c in (terms or {}).items() if c
        }
        self._hash: int | None = None

    @classmethod
    def from_powers(cls, powers: Mapping[int, int]) -> LaurentPoly:
        """Build from a mapping of integer powers to coefficients."""
        return cls({2 * p: c for p, c in powers.items()})

    @classmethod
    def monomial(cls, coeff: int = 1, power: Number = 0) -> LaurentPoly:
        doubled = Fraction(power) * 2
        if doubled.denominator != 1:
            raise ValueError(f"power must be a multiple of 1/2, got {power}")
        return cls({int(doubled): coeff})

    @classmethod
    def constant(cls, coeff: int) -> LaurentPoly:
        return cls({0: coeff})

    @property
    def terms(self) -> dict[int, int]:
        """Copy of the doubled-exponent to coefficient mapping."""
        return dict(self._terms)

    def items(self) -> Iterator[tuple[int, int]]:
        """Iterate ``(doubled_exponent, coefficient)`` in increasing order."""
        return iter(sorted(self._terms.items()))

    def coefficient(self, power: Number) -> int:
        return self._terms.get(int(Fraction(power) * 2), 0)

    def powers(self) -> dict[int, int]:
        """Mapping of integer powers to coefficients.

        Raises:
            ValueError: If some power is a proper half-integer.
        """
        if not self.has_integer_powers():
            raise ValueError("polynomial has half-integer powers")
        return {e // 2: c for e, c in self._terms.items()}

    def has_integer_powers(self) -> bool:
        return all(e % 2 == 0 for e in self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    @property
    def degree(self) -> Fraction:
        """Largest power present (0 for the zero polynomial)."""
        return Fraction(max(self._terms, default=0), 2)

    @property
    def min_degree(self) -> Fraction:
        return Fraction(min(self._terms, default=0), 2)

    def _coerce(self, other: object) -> LaurentPoly | None:
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, int):
            return LaurentPoly.constant(other)
        return None

    def __add__(self, other: object) -> LaurentPoly:
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        out = dict(self._terms)
        for e, c in rhs._terms.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self) -> LaurentPoly:
        return LaurentPoly({e: -c for e, c in self._terms.items()})

    def __sub__(self, other: object) -> LaurentPoly:
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return self + (-rhs)

    def __rsub__(self, other: object) -> LaurentPoly:
        lhs = self._coerce(other)
        if lhs is None:
            return NotImplemented
        return lhs - self

    def __mul__(self, other: object) -> LaurentPoly:
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        out: dict[int, int] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in rhs._terms.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> LaurentPoly:
        if n < 0:
            if len(self._terms) != 1 or abs(next(iter(self._terms.values()))) != 1:
                raise ValueError("only unit monomials have negative powers")
            (e, c), = self._terms.items()
            return LaurentPoly({e * n: c if n % 2 else 1})
        result = LaurentPoly.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return self._terms == rhs._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def shift(self, power: Number) -> LaurentPoly:
        """Multiply by ``t^power``."""
        d = int(Fraction(power) * 2)
        return LaurentPoly({e + d: c for e, c in self._terms.items()})

    def substitute_inverse(self) -> LaurentPoly:
        """Return ``p(t^-1)``."""
        return LaurentPoly({-e: c for e, c in self._terms.items()})

    def symmetrize(self) -> LaurentPoly:
        """Multiply by ``+-t^k`` so the powers are centred on 0 and ``p(1) > 0``.

        For a polynomial with ``p(1) == 0`` the top coefficient is made
        positive instead.
        """
        if not self._terms:
            return self
        centred = LaurentPoly(
            {e - (max(self._terms) + min(self._terms)) // 2: c for e, c in self._terms.items()}
        )
        value = sum(centred._terms.values())
        if value < 0 or (value == 0 and centred._terms[max(centred._terms)] < 0):
            return -centred
        return centred

    def derivative(self) -> LaurentPoly:
        """Formal derivative with respect to ``t`` (integer powers only)."""
        return LaurentPoly.from_powers(
            {p - 1: c * p for p, c in self.powers().items()}
        )

    def evaluate(self, value: Number) -> Fraction:
        """Evaluate at a rational point (integer powers only)."""
        value = Fraction(value)
        total = Fraction(0)
        for p, c in self.powers().items():
            if p < 0 and value == 0:
                raise ZeroDivisionError("negative power evaluated at 0")
            total += c * value**p
        return total

    def evaluate_root(self, level: int, half_step: int) -> CyclotomicElement:
        """Evaluate exactly with ``t^(1/2) = zeta_level^half_step``."""
        coeffs = [0] * level
        for e, c in self._terms.items():
            coeffs[(e * half_step) % level] += c
        return CyclotomicElement(level, coeffs)

    def format(self, var: str = "t") -> str:
        if not self._terms:
            return "0"
        parts = []
        for e, c in sorted(self._terms.items(), reverse=True):
            parts.append(_format_term(c, _format_power(var, e), not parts))
        return "".join(parts)

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"LaurentPoly('{self.format()}')"

    def to_json(self) -> list[list[int]]:
        return [[e, c] for e, c in sorted(self._terms.items())]

    @classmethod
    def from_json(cls, data: Sequence[Sequence[int]]) -> LaurentPoly:
        return cls({int(e): int(c) for e, c in data})


class LaurentPoly2:
    """Integer Laurent polynomial in ``a`` and ``z``.

    Keys are ``(exp_a, exp_z)``. Polynomials of knots never carry negative
    powers of ``z``; intermediate values of the skein recursion may, because
    the loop value ``(a + a^-1)/z - 1`` divides by ``z``.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[tuple[int, int], int] | None = None):
        self._terms: dict[tuple[int, int], int] = {
            (int(k[0]), int(k[1])): int(c) for k, c in (terms or {}).items() if c
        }
        self._hash: int | None = None

    @classmethod
    def monomial(cls, coeff: int = 1, exp_a: int = 0, exp_z: int = 0) -> LaurentPoly2:
        return cls({(exp_a, exp_z): coeff})

    @classmethod
    def constant(cls, coeff: int) -> LaurentPoly2:
        return cls({(0, 0): coeff})

    @property
    def terms(self) -> dict[tuple[int, int], int]:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[tuple[int, int], int]]:
        return iter(sorted(self._terms.items()))

    def coefficient(self, exp_a: int, exp_z: int) -> int:
        return self._terms.get((exp_a, exp_z), 0)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def _coerce(self, other: object) -> LaurentPoly2 | None:
        if isinstance(other, LaurentPoly2):
            return other
        if isinstance(other, int):
            return LaurentPoly2.constant(other)
        return None

    def __add__(self, other: object) -> LaurentPoly2:
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        out = dict(self._terms)
        for k, c in rhs._terms.items():
            out[k] = out.get(k, 0) + c
        return LaurentPoly2(out)

    __radd__ = __add__

    def __neg__(self) -> LaurentPoly2:
        return LaurentPoly2({k: -c for k, c in self._terms.items()})

    def __sub__(self, other: object) -> LaurentPoly2:
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return self + (-rhs)

    def __rsub__(self, other: object) -> LaurentPoly2:
        lhs = self._coerce(other)
        if lhs is None:
            return NotImplemented
        return lhs - self

    def __mul__(self, other: object) -> LaurentPoly2:
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        out: dict[tuple[int, int], int] = {}
        for (a1, z1), c1 in self._terms.items():
            for (a2, z2), c2 in rhs._terms.items():
                key = (a1 + a2, z1 + z2)
                out[key] = out.get(key, 0) + c1 * c2
        return LaurentPoly2(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> LaurentPoly2:
        if n < 0:
            raise ValueError("negative powers are not supported")
        result = LaurentPoly2.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return self._terms == rhs._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def mirror(self) -> LaurentPoly2:
        """Return the polynomial with ``a`` replaced by ``a^-1``."""
        return LaurentPoly2({(-a, z): c for (a, z), c in self._terms.items()})

    def substitute(self, a: LaurentPoly, z: LaurentPoly) -> LaurentPoly:
        """Specialize to one variable by substituting polynomials for ``a`` and ``z``.

        Negative powers of ``a`` require ``a`` to be a unit monomial; ``z``
        may only appear with non-negative powers.
        """
        a_cache: dict[int, LaurentPoly] = {}
        z_cache: dict[int, LaurentPoly] = {}
        total = LaurentPoly()
        for (ea, ez), c in self._terms.items():
            if ez < 0:
                raise ValueError("cannot substitute into a negative power of z")
            if ea not in a_cache:
                a_cache[ea] = a**ea
            if ez not in z_cache:
                z_cache[ez] = z**ez
            total = total + a_cache[ea] * z_cache[ez] * c
        return total

    def scale_a(self, power: int) -> LaurentPoly2:
        """Multiply by ``a^power``."""
        return LaurentPoly2({(a + power, z): c for (a, z), c in self._terms.items()})

    def format(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for (a, z), c in sorted(self._terms.items(), key=lambda kv: (-kv[0][1], -kv[0][0])):
            body = "*".join(
                piece
                for piece in (_format_power("a", 2 * a), _format_power("z", 2 * z))
                if piece
            )
            parts.append(_format_term(c, body, not parts))
        return "".join(parts)

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"LaurentPoly2('{self.format()}')"

    def to_json(self) -> list[list[int]]:
        return [[a, z, c] for (a, z), c in sorted(self._terms.items())]

    @classmethod
    def from_json(cls, data: Sequence[Sequence[int]]) -> LaurentPoly2:
        return cls({(int(a), int(z)): int(c) for a, z, c in data})


@dataclass(frozen=True)
class TruncatedSeries:
    """Power series in ``h`` with rational coefficients, truncated at ``order``.

    Attributes:
        order: Highest power of ``h`` kept.
        coefficients: Coefficients of ``h^0`` through ``h^order``.
    """

    order: int
    coefficients: tuple[Fraction, ...]

    def __post_init__(self):
        if self.order < 0:
            raise ValueError(f"order must be non-negative, got {self.order}")
        if len(self.coefficients) != self.order + 1:
            raise ValueError(
                f"expected {self.order + 1} coefficients, got {len(self.coefficients)}"
            )
        object.__setattr__(
            self, "coefficients", tuple(Fraction(c) for c in self.coefficients)
        )

    @classmethod
    def constant(cls, value: Number, order: int) -> TruncatedSeries:
        return cls(order, (Fraction(value),) + (Fraction(0),) * order)

    @classmethod
    def zero(cls, order: int) -> TruncatedSeries:
        return cls.constant(0, order)

    @classmethod
    def one(cls, order: int) -> TruncatedSeries:
        return cls.constant(1, order)

    def coefficient(self, n: int) -> Fraction:
        return self.coefficients[n] if 0 <= n <= self.order else Fraction(0)

    def is_zero(self) -> bool:
        return not any(self.coefficients)

    def _check(self, other: TruncatedSeries) -> None:
        if other.order != self.order:
            raise ValueError(f"order mismatch: {self.order} != {other.order}")

    def __add__(self, other: TruncatedSeries | Number) -> TruncatedSeries:
        if not isinstance(other, TruncatedSeries):
            other = TruncatedSeries.constant(other, self.order)
        self._check(other)
        return TruncatedSeries(
            self.order, tuple(a + b for a, b in zip(self.coefficients, other.coefficients))
        )

    __radd__ = __add__

    def __neg__(self) -> TruncatedSeries:
        return TruncatedSeries(self.order, tuple(-a for a in self.coefficients))

    def __sub__(self, other: TruncatedSeries | Number) -> TruncatedSeries:
        return self + (-other)

    def __rsub__(self, other: Number) -> TruncatedSeries:
        return (-self) + other

    def __mul__(self, other: TruncatedSeries | Number) -> TruncatedSeries:
        if not isinstance(other, TruncatedSeries):
            k = Fraction(other)
            return TruncatedSeries(self.order, tuple(a * k for a in self.coefficients))
        self._check(other)
        a, b = self.coefficients, other.coefficients
        out = [Fraction(0)] * (self.order + 1)
        for i, ai in enumerate(a):
            if not ai:
                continue
            for j in range(self.order + 1 - i):
                out[i + j] += ai * b[j]
        return TruncatedSeries(self.order, tuple(out))

    __rmul__ = __mul__

    def inverse(self) -> TruncatedSeries:
        """Multiplicative inverse; the constant term must be nonzero."""
        a = self.coefficients
        if a[0] == 0:
            raise ZeroDivisionError("series with zero constant term is not a unit")
        out = [Fraction(0)] * (self.order + 1)
        out[0] = 1 / a[0]
        for n in range(1, self.order + 1):
            out[n] = -sum(a[k] * out[n - k] for k in range(1, n + 1)) / a[0]
        return TruncatedSeries(self.order, tuple(out))

    def __pow__(self, n: int) -> TruncatedSeries:
        if n < 0:
            return self.inverse() ** (-n)
        result = TruncatedSeries.one(self.order)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result


def exp_series(rate: Number, order: int) -> TruncatedSeries:
    """Return ``exp(rate * h)`` truncated at ``h^order``."""
    rate = Fraction(rate)
    return TruncatedSeries(
        order, tuple(rate**n / math.factorial(n) for n in range(order + 1))
    )


@dataclass(frozen=True)
class ComplexSeries:
    """Gaussian-rational power series kept as a (real, imaginary) pair."""

    real: TruncatedSeries
    imag: TruncatedSeries

    @classmethod
    def from_real(cls, series: TruncatedSeries) -> ComplexSeries:
        return cls(series, TruncatedSeries.zero(series.order))

    @classmethod
    def from_imag(cls, series: TruncatedSeries) -> ComplexSeries:
        return cls(TruncatedSeries.zero(series.order), series)

    @classmethod
    def one(cls, order: int) -> ComplexSeries:
        return cls.from_real(TruncatedSeries.one(order))

    @property
    def order(self) -> int:
        return self.real.order

    def __add__(self, other: ComplexSeries) -> ComplexSeries:
        return ComplexSeries(self.real + other.real, self.imag + other.imag)

    def __neg__(self) -> ComplexSeries:
        return ComplexSeries(-self.real, -self.imag)

    def __sub__(self, other: ComplexSeries) -> ComplexSeries:
        return self + (-other)

    def __mul__(self, other: ComplexSeries | Number) -> ComplexSeries:
        if not isinstance(other, ComplexSeries):
            return ComplexSeries(self.real * other, self.imag * other)
        return ComplexSeries(
            self.real * other.real - self.imag * other.imag,
            self.real * other.imag + self.imag * other.real,
        )

    __rmul__ = __mul__

    def conjugate(self) -> ComplexSeries:
        return ComplexSeries(self.real, -self.imag)

    def inverse(self) -> ComplexSeries:
        norm = self.real * self.real + self.imag * self.imag
        return self.conjugate() * ComplexSeries.from_real(norm.inverse())

    def __pow__(self, n: int) -> ComplexSeries:
        if n < 0:
            return self.inverse() ** (-n)
        result = ComplexSeries.one(self.order)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def real_part(self) -> TruncatedSeries:
        """Return the real series, insisting that the imaginary part vanishes.

        Raises:
            NonRealResult: If any imaginary coefficient is nonzero.
        """
        if not self.imag.is_zero():
            bad = [n for n, c in enumerate(self.imag.coefficients) if c]
            raise NonRealResult(f"imaginary coefficients survive at h^{bad}")
        return self.real


SeriesLike = ComplexSeries | TruncatedSeries


def _as_complex(value: SeriesLike) -> ComplexSeries:
    return value if isinstance(value, ComplexSeries) else ComplexSeries.from_real(value)


class _PowerCache:
    def __init__(self, base: ComplexSeries):
        self.base = base
        self.cache: dict[int, ComplexSeries] = {0: ComplexSeries.one(base.order)}

    def __call__(self, n: int) -> ComplexSeries:
        if n not in self.cache:
            self.cache[n] = self.base**n
        return self.cache[n]


def series_compose(
    f: LaurentPoly | LaurentPoly2, substitution: Mapping[str, SeriesLike], order: int
) -> ComplexSeries:
    """Substitute truncated series for the variables of ``f``.

    For a :class:`LaurentPoly2` the keys are ``"a"`` and ``"z"``. For a
    :class:`LaurentPoly` use ``"t"`` (integer powers only) or ``"t^1/2"``.

    Args:
        f: Polynomial to expand.
        substitution: Series assigned to each variable.
        order: Truncation order of the result.

    Returns:
        The composed series as a complex pair.
    """
    subs = {k: _as_complex(v) for k, v in substitution.items()}
    for key, value in subs.items():
        if value.order != order:
            raise ValueError(f"substitution for {key} has order {value.order}")
    total = ComplexSeries.from_real(TruncatedSeries.zero(order))
    if isinstance(f, LaurentPoly2):
        a_pow, z_pow = _PowerCache(subs["a"]), _PowerCache(subs["z"])
        for (ea, ez), c in f.items():
            total = total + a_pow(ea) * z_pow(ez) * c
        return total
    if "t^1/2" in subs:
        half = _PowerCache(subs["t^1/2"])
        for e, c in f.items():
            total = total + half(e) * c
        return total
    t_pow = _PowerCache(subs["t"])
    for p, c in sorted(f.powers().items()):
        total = total + t_pow(p) * c
    return total


def series_compose_exp(
    f: LaurentPoly | LaurentPoly2, substitution: Mapping[str, SeriesLike], order: int
) -> TruncatedSeries:
    """Compose like :func:`series_compose` and demand a real result.

    Raises:
        NonRealResult: If an imaginary coefficient survives the truncation.
    """
    return series_compose(f, substitution, order).real_part()


@lru_cache(maxsize=None)
def cyclotomic_modulus(level: int) -> tuple[int, ...]:
    """Coefficients of the ``level``-th cyclotomic polynomial, lowest first."""
    if level < 1:
        raise ValueError(f"level must be positive, got {level}")
    x = sympy.Symbol("x")
    poly = sympy.Poly(sympy.cyclotomic_poly(level, x), x)
    return tuple(int(c) for c in reversed(poly.all_coeffs()))


def _reduce(level: int, coeffs: Sequence[Number]) -> tuple[Fraction, ...]:
    phi = cyclotomic_modulus(level)
    d = len(phi) - 1
    work = [Fraction(c) for c in coeffs] + [Fraction(0)] * max(0, d - len(coeffs))
    for k in range(len(work) - 1, d - 1, -1):
        lead = work[k]
        if lead:
            shift = k - d
            for j, p in enumerate(phi):
                if p:
                    work[shift + j] -= lead * p
    return tuple(work[:d])


class CyclotomicElement:
    """Element of ``Q[x]/(Phi_level(x))``, with ``x`` standing for ``zeta_level``.

    Coefficients are always reduced modulo the cyclotomic polynomial, so two
    elements are equal exactly when their coefficient vectors are.
    """

    __slots__ = ("level", "coeffs")

    def __init__(self, level: int, coeffs: Sequence[Number]):
        self.level = level
        self.coeffs: tuple[Fraction, ...] = _reduce(level, coeffs)

    @classmethod
    def from_rational(cls, level: int, value: Number) -> CyclotomicElement:
        return cls(level, [value])

    @classmethod
    def zero(cls, level: int) -> CyclotomicElement:
        return cls(level, [])

    @classmethod
    def one(cls, level: int) -> CyclotomicElement:
        return cls(level, [1])

    def _coerce(self, other: object) -> CyclotomicElement | None:
        if isinstance(other, CyclotomicElement):
            if other.level != self.level:
                raise ValueError(f"level mismatch: {self.level} != {other.level}")
            return other
        if isinstance(other, (int, Fraction)):
            return CyclotomicElement.from_rational(self.level, other)
        return None

    def __add__(self, other: object) -> CyclotomicElement:
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return CyclotomicElement(
            self.level, [a + b for a, b in zip(self.coeffs, rhs.coeffs)]
        )

    __radd__ = __add__

    def __neg__(self) -> CyclotomicElement:
        return CyclotomicElement(self.level, [-a for a in self.coeffs])

    def __sub__(self, other: object) -> CyclotomicElement:
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return self + (-rhs)

    def __rsub__(self, other: object) -> CyclotomicElement:
        lhs = self._coerce(other)
        if lhs is None:
            return NotImplemented
        return lhs - self

    def __mul__(self, other: object) -> CyclotomicElement:
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        a, b = self.coeffs, rhs.coeffs
        out = [Fraction(0)] * max(1, len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        out[i + j] += ai * bj
        return CyclotomicElement(self.level, out)

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> CyclotomicElement:
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return self * cyclotomic_invert(rhs)

    def __rtruediv__(self, other: object) -> CyclotomicElement:
        lhs = self._coerce(other)
        if lhs is None:
            return NotImplemented
        return lhs * cyclotomic_invert(self)

    def __pow__(self, n: int) -> CyclotomicElement:
        base = self
        if n < 0:
            base, n = cyclotomic_invert(self), -n
        result = CyclotomicElement.one(self.level)
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self) -> CyclotomicElement:
        """Complex conjugate, sending ``zeta`` to ``zeta^-1``."""
        out = [Fraction(0)] * self.level
        for k, c in enumerate(self.coeffs):
            out[(-k) % self.level] += c
        return CyclotomicElement(self.level, out)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_real(self) -> bool:
        return self == self.conjugate()

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other: object) -> bool:
        if isinstance(other, CyclotomicElement):
            return self.level == other.level and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == _reduce(self.level, [other])
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.level, self.coeffs))

    def __repr__(self) -> str:
        terms = []
        for k, c in enumerate(self.coeffs):
            if c:
                body = "" if k == 0 else ("z" if k == 1 else f"z^{k}")
                terms.append(_format_term(c, body, not terms))
        return f"CyclotomicElement({self.level}, {''.join(terms) or '0'})"

    def to_json(self) -> dict:
        return {"level": self.level, "coeffs": [str(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, data: Mapping) -> CyclotomicElement:
        return cls(int(data["level"]), [Fraction(c) for c in data["coeffs"]])


def cyclotomic_root(level: int, power: int) -> CyclotomicElement:
    """Return ``zeta_level^power`` as a reduced cyclotomic element."""
    if level < 1:
        raise ValueError(f"level must be positive, got {level}")
    coeffs = [0] * level
    coeffs[power % level] = 1
    return CyclotomicElement(level, coeffs)


def cyclotomic_invert(x: CyclotomicElement) -> CyclotomicElement:
    """Multiplicative inverse in ``Q[x]/(Phi_level)``.

    Uses the extended Euclidean algorithm over the rationals (``sympy.invert``).

    Raises:
        ZeroDivisionError: If ``x`` is zero.
    """
    if x.is_zero():
        raise ZeroDivisionError("cannot invert zero in a cyclotomic field")
    if not any(x.coeffs[1:]):
        return CyclotomicElement.from_rational(x.level, 1 / x.coeffs[0])
    var = sympy.Symbol("x")
    num = sympy.Poly(
        [sympy.Rational(c.numerator, c.denominator) for c in reversed(x.coeffs)],
        var,
        domain=sympy.QQ,
    )
    mod = sympy.Poly(list(reversed(cyclotomic_modulus(x.level))), var, domain=sympy.QQ)
    inv = sympy.invert(num, mod)
    coeffs = []
    for c in reversed(inv.all_coeffs()):
        c = sympy.Rational(c)
        coeffs.append(Fraction(int(c.p), int(c.q)))
    return CyclotomicElement(x.level, coeffs)


@dataclass(frozen=True)
class SymIntMatrix:
    """Symmetric integer matrix."""

    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(v) for v in row) for row in self.entries)
        n = len(rows)
        for i, row in enumerate(rows):
            if len(row) != n:
                raise ValidationError(f"row {i} has length {len(row)}, expected {n}")
            for j in range(i):
                if row[j] != rows[j][i]:
                    raise ValidationError(f"matrix is not symmetric at ({i}, {j})")
        object.__setattr__(self, "entries", rows)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> SymIntMatrix:
        return cls(tuple(tuple(r) for r in rows))

    @property
    def dimension(self) -> int:
        return len(self.entries)


def matrix_signature(m: SymIntMatrix) -> tuple[int, int, int]:
    """Exact inertia ``(sigma_plus, sigma_minus, nullity)`` of a symmetric matrix.

    Symmetric Gaussian elimination over the rationals: a nonzero diagonal entry
    is used as a 1x1 pivot; otherwise an off-diagonal pair forms a 2x2 pivot
    ``[[0, b], [b, 0]]`` which contributes one positive and one negative square.
    """
    work = [[Fraction(v) for v in row] for row in m.entries]
    plus = minus = 0
    while work:
        n = len(work)
        pivot = next((i for i in range(n) if work[i][i] != 0), None)
        if pivot is not None:
            d = work[pivot][pivot]
            if d > 0:
                plus += 1
            else:
                minus += 1
            rest = [i for i in range(n) if i != pivot]
            work = [
                [work[r][c] - work[r][pivot] * work[pivot][c] / d for c in rest]
                for r in rest
            ]
            continue
        pair = next(
            ((i, j) for i in range(n) for j in range(i + 1, n) if work[i][j] != 0),
            None,
        )
        if pair is None:
            break
        i, j = pair
        b = work[i][j]
        plus += 1
        minus += 1
        rest = [k for k in range(n) if k not in pair]
        work = [
            [
                work[r][c] - (work[r][i] * work[j][c] + work[r][j] * work[i][c]) / b
                for c in rest
            ]
            for r in rest
        ]
    return plus, minus, m.dimension - plus - minus


def char_poly_sign_counts(m: SymIntMatrix) -> tuple[int, int, int]:
    """Eigenvalue sign counts from the characteristic polynomial.

    Root counting uses sympy's Sturm-sequence based ``count_roots`` on each
    square-free factor. Independent of :func:`matrix_signature`.
    """
    if m.dimension == 0:
        return 0, 0, 0
    lam = sympy.Symbol("lam")
    poly = sympy.Poly(sympy.Matrix(m.entries).charpoly(lam).as_expr(), lam)
    coeffs = list(reversed(poly.all_coeffs()))
    nullity = next(k for k, c in enumerate(coeffs) if c != 0)
    reduced = sympy.Poly(list(reversed(coeffs[nullity:])), lam)
    plus = minus = 0
    _, factors = reduced.sqf_list()
    for factor, mult in factors:
        plus += mult * factor.count_roots(0, None)
        minus += mult * factor.count_roots(None, 0)
    return plus, minus, nullity
