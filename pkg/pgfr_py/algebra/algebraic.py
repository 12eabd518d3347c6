from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import mpmath

from ..errors import InvalidParameter
from .integers import euler_phi, factorize
from .polynomials import (
    IntPolynomial,
    cyclotomic,
    isolate_real_roots,
    reduce_mod,
    refine_root,
    root_index,
)


DEFAULT_DIGITS = 40


@dataclass(frozen=True)
class Rational:
    value: Fraction


@dataclass(frozen=True)
class Surd:
    """a + b * sqrt(radicand) with b != 0 and a square-free radicand > 1."""
    a: Fraction
    b: Fraction
    radicand: int


@dataclass(frozen=True)
class CyclotomicElement:
    """Residue of a polynomial in w modulo the order-th cyclotomic polynomial, w = exp(2*pi*i/order)."""
    order: int
    residue: tuple[Fraction, ...]


@dataclass(frozen=True)
class CubicRoot:
    minpoly: IntPolynomial
    low: Fraction
    high: Fraction


@dataclass(frozen=True)
class CubicConjugateSum:
    """constant + c0 * r0 + c1 * r1 over the two smallest real roots of an irreducible cubic."""
    minpoly: IntPolynomial
    constant: Fraction
    coefficients: tuple[Fraction, Fraction]


AlgebraicNumber = Union[Rational, Surd, CyclotomicElement, CubicRoot, CubicConjugateSum]


def rational(value) -> Rational:
    return Rational(Fraction(value))


def make_surd(a, b, radicand: int) -> Rational | Surd:
    a = Fraction(a)
    b = Fraction(b)
    if radicand < 0:
        raise InvalidParameter(f'negative radicand {radicand}')
    square, free = 1, 1
    for p, exponent in (factorize(radicand).items() if radicand > 1 else ()):
        square *= p ** (exponent // 2)
        free *= p ** (exponent % 2)
    if radicand == 0:
        return Rational(a)
    b *= square
    if b == 0:
        return Rational(a)
    if free == 1:
        return Rational(a + b)
    return Surd(a=a, b=b, radicand=free)


def cyclotomic_element(order: int, poly: IntPolynomial) -> CyclotomicElement:
    residue = reduce_mod(poly, cyclotomic(order))
    size = euler_phi(order)
    return CyclotomicElement(order=order, residue=tuple(Fraction(residue.coefficient(i)) for i in range(size)))


def is_zero(value: AlgebraicNumber) -> bool:
    if isinstance(value, Rational):
        return value.value == 0
    if isinstance(value, CyclotomicElement):
        return not any(value.residue)
    if isinstance(value, CubicConjugateSum):
        return value.constant == 0 and not any(value.coefficients)
    # Surd has b != 0 and CubicRoot is a root of an irreducible cubic.
    return False


def _cubic_trace(minpoly: IntPolynomial) -> Fraction:
    if minpoly.degree != 3 or minpoly.leading != 1:
        raise InvalidParameter(f'expected a monic cubic, got {minpoly}')
    return Fraction(-minpoly.coefficient(2))


def _cubic_is_irreducible(minpoly: IntPolynomial) -> bool:
    constant = abs(minpoly.coefficient(0))
    if constant == 0:
        return False
    for p in range(1, constant + 1):
        if constant % p == 0 and (minpoly.evaluate(p) == 0 or minpoly.evaluate(-p) == 0):
            return False
    return True


def exact_linear_combination(values: Sequence[AlgebraicNumber], coefficients: Sequence[int]) -> AlgebraicNumber:
    """Exact value of sum(l_i * v_i) in the single number field the values share."""
    if len(values) != len(coefficients):
        raise InvalidParameter(f'{len(values)} values but {len(coefficients)} coefficients')
    constant = Fraction(0)
    surds: dict[int, Fraction] = {}
    cyclotomic_sum: dict[int, list[Fraction]] = {}
    cubic_sum: dict[IntPolynomial, list[Fraction]] = {}
    cubic_constant = Fraction(0)
    for value, weight in zip(values, coefficients):
        if isinstance(value, Rational):
            constant += weight * value.value
        elif isinstance(value, Surd):
            constant += weight * value.a
            surds[value.radicand] = surds.get(value.radicand, Fraction(0)) + weight * value.b
        elif isinstance(value, CyclotomicElement):
            accumulated = cyclotomic_sum.setdefault(value.order, [Fraction(0)] * len(value.residue))
            if weight:
                for i, c in enumerate(value.residue):
                    if c:
                        accumulated[i] += weight * c
        elif isinstance(value, CubicRoot):
            accumulated = cubic_sum.setdefault(value.minpoly, [Fraction(0)] * 3)
            accumulated[root_index(value.minpoly, value.low, value.high)] += weight
        elif isinstance(value, CubicConjugateSum):
            accumulated = cubic_sum.setdefault(value.minpoly, [Fraction(0)] * 3)
            cubic_constant += weight * value.constant
            accumulated[0] += weight * value.coefficients[0]
            accumulated[1] += weight * value.coefficients[1]
        else:
            raise InvalidParameter(f'unsupported algebraic value {value!r}')
    fields = len(surds) + len(cyclotomic_sum) + len(cubic_sum)
    if fields > 1:
        raise InvalidParameter('values do not share one number field representation')
    constant += cubic_constant
    if surds:
        (radicand, b), = surds.items()
        return make_surd(constant, b, radicand)
    if cyclotomic_sum:
        (order, residue), = cyclotomic_sum.items()
        residue[0] += constant
        if not any(residue[1:]):
            return Rational(residue[0])
        return CyclotomicElement(order=order, residue=tuple(residue))
    if cubic_sum:
        (minpoly, weights), = cubic_sum.items()
        if not _cubic_is_irreducible(minpoly):
            raise InvalidParameter(f'{minpoly} is reducible over the rationals')
        # r2 = trace - r0 - r1
        constant += weights[2] * _cubic_trace(minpoly)
        c0 = weights[0] - weights[2]
        c1 = weights[1] - weights[2]
        if c0 == 0 and c1 == 0:
            return Rational(constant)
        return CubicConjugateSum(minpoly=minpoly, constant=constant, coefficients=(c0, c1))
    return Rational(constant)


def _mp_fraction(value: Fraction):
    return mpmath.mpf(value.numerator) / value.denominator


def _cubic_root_values(minpoly: IntPolynomial, digits: int) -> list:
    width = Fraction(1, 10 ** (digits + 5))
    roots = []
    for low, high in isolate_real_roots(minpoly):
        low, high = refine_root(minpoly, low, high, width)
        roots.append((_mp_fraction(low) + _mp_fraction(high)) / 2)
    return roots


def approximate(value: AlgebraicNumber, digits: int = DEFAULT_DIGITS):
    """mpmath approximation; cyclotomic elements evaluate to mpc, everything else to mpf."""
    with mpmath.workdps(digits + 10):
        if isinstance(value, Rational):
            result = _mp_fraction(value.value)
        elif isinstance(value, Surd):
            result = _mp_fraction(value.a) + _mp_fraction(value.b) * mpmath.sqrt(value.radicand)
        elif isinstance(value, CyclotomicElement):
            w = mpmath.expjpi(mpmath.mpf(2) / value.order)
            result = mpmath.mpc(0)
            for power, c in enumerate(value.residue):
                if c:
                    result += _mp_fraction(c) * w ** power
        elif isinstance(value, CubicRoot):
            width = Fraction(1, 10 ** (digits + 5))
            low, high = refine_root(value.minpoly, value.low, value.high, width)
            result = (_mp_fraction(low) + _mp_fraction(high)) / 2
        elif isinstance(value, CubicConjugateSum):
            roots = _cubic_root_values(value.minpoly, digits)
            result = (
                _mp_fraction(value.constant)
                + _mp_fraction(value.coefficients[0]) * roots[0]
                + _mp_fraction(value.coefficients[1]) * roots[1]
            )
        else:
            raise InvalidParameter(f'unsupported algebraic value {value!r}')
        return +result


def to_float(value: AlgebraicNumber) -> float:
    approx = approximate(value, 20)
    if isinstance(approx, mpmath.mpc):
        return float(approx.real)
    return float(approx)


def to_text(value: AlgebraicNumber) -> str:
    if isinstance(value, Rational):
        return str(value.value)
    if isinstance(value, Surd):
        sign = '-' if value.b < 0 else '+'
        return f'{value.a} {sign} {abs(value.b)}*sqrt({value.radicand})'
    if isinstance(value, CyclotomicElement):
        terms = [
            f'{c}' if power == 0 else f'{c}*w^{power}'
            for power, c in enumerate(value.residue)
            if c
        ]
        return (' + '.join(terms) or '0') + f' (w = exp(2*pi*i/{value.order}))'
    if isinstance(value, CubicRoot):
        index = root_index(value.minpoly, value.low, value.high)
        return f'root #{index} of {value.minpoly}'
    if isinstance(value, CubicConjugateSum):
        c0, c1 = value.coefficients
        return f'{value.constant} + {c0}*r0 + {c1}*r1 (roots of {value.minpoly})'
    raise InvalidParameter(f'unsupported algebraic value {value!r}')


def cubic_roots(minpoly: IntPolynomial) -> tuple[CubicRoot, ...]:
    if not _cubic_is_irreducible(minpoly):
        raise InvalidParameter(f'{minpoly} is reducible over the rationals')
    return tuple(CubicRoot(minpoly=minpoly, low=low, high=high) for low, high in isolate_real_roots(minpoly))
