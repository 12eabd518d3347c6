from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from ..errors import InvalidParameter
from .integers import divisors


# Coefficients are stored lowest degree first, trailing zeros stripped.
def _normalize(coefficients: Iterable) -> tuple:
    items = list(coefficients)
    while items and not items[-1]:
        items.pop()
    return tuple(items)


@dataclass(frozen=True)
class IntPolynomial:
    coefficients: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, 'coefficients', _normalize(int(c) for c in self.coefficients))

    @classmethod
    def monomial(cls, power: int, coefficient: int = 1) -> IntPolynomial:
        return cls((0,) * power + (coefficient,))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def leading(self) -> int:
        return self.coefficients[-1] if self.coefficients else 0

    def is_zero(self) -> bool:
        return not self.coefficients

    def coefficient(self, power: int) -> int:
        return self.coefficients[power] if 0 <= power < len(self.coefficients) else 0

    def __add__(self, other: IntPolynomial) -> IntPolynomial:
        size = max(len(self.coefficients), len(other.coefficients))
        return IntPolynomial(tuple(self.coefficient(i) + other.coefficient(i) for i in range(size)))

    def __neg__(self) -> IntPolynomial:
        return IntPolynomial(tuple(-c for c in self.coefficients))

    def __sub__(self, other: IntPolynomial) -> IntPolynomial:
        return self + (-other)

    def __mul__(self, other: IntPolynomial | int) -> IntPolynomial:
        if isinstance(other, int):
            return IntPolynomial(tuple(c * other for c in self.coefficients))
        if self.is_zero() or other.is_zero():
            return IntPolynomial(())
        result = [0] * (len(self.coefficients) + len(other.coefficients) - 1)
        for i, a in enumerate(self.coefficients):
            if not a:
                continue
            for j, b in enumerate(other.coefficients):
                result[i + j] += a * b
        return IntPolynomial(tuple(result))

    __rmul__ = __mul__

    def evaluate(self, x):
        total = 0 * x
        for c in reversed(self.coefficients):
            total = total * x + c
        return total

    def derivative(self) -> IntPolynomial:
        return IntPolynomial(tuple(i * c for i, c in enumerate(self.coefficients) if i))

    def __str__(self) -> str:
        if self.is_zero():
            return '0'
        terms = []
        for power in range(self.degree, -1, -1):
            c = self.coefficients[power]
            if not c:
                continue
            sign = '-' if c < 0 else '+'
            size = abs(c)
            if power == 0:
                body = str(size)
            else:
                body = ('' if size == 1 else f'{size}*') + ('x' if power == 1 else f'x^{power}')
            terms.append((sign, body))
        first_sign, first_body = terms[0]
        text = ('-' if first_sign == '-' else '') + first_body
        for sign, body in terms[1:]:
            text += f' {sign} {body}'
        return text


@dataclass(frozen=True)
class CubicFactor:
    root: int
    quadratic: IntPolynomial


def poly_divmod(f: IntPolynomial, g: IntPolynomial) -> tuple[IntPolynomial, IntPolynomial]:
    if g.is_zero():
        raise InvalidParameter('division by the zero polynomial')
    remainder = list(f.coefficients)
    quotient = [0] * max(f.degree - g.degree + 1, 0)
    lead = g.leading
    for shift in range(f.degree - g.degree, -1, -1):
        c = remainder[shift + g.degree]
        if not c:
            continue
        if c % lead:
            raise InvalidParameter(f'quotient of {f} by {g} is not integral')
        q = c // lead
        quotient[shift] = q
        for i, b in enumerate(g.coefficients):
            remainder[shift + i] -= q * b
    return IntPolynomial(tuple(quotient)), IntPolynomial(tuple(remainder))


def reduce_mod(f: IntPolynomial, g: IntPolynomial) -> IntPolynomial:
    return poly_divmod(f, g)[1]


@lru_cache(maxsize=None)
def cyclotomic(k: int) -> IntPolynomial:
    if k < 1:
        raise InvalidParameter(f'cyclotomic polynomial needs k >= 1, got {k}')
    result = IntPolynomial.monomial(k) - IntPolynomial((1,))
    for d in divisors(k):
        if d < k:
            result, remainder = poly_divmod(result, cyclotomic(d))
            if not remainder.is_zero():
                raise InvalidParameter(f'x^{k} - 1 not divisible by Phi_{d}')
    return result


def relation_poly(n: int, coefficients: Sequence[int]) -> IntPolynomial:
    """Encode sum l_j * (2 + x^j + x^(2n-j)) for the path eigenvalue combination."""
    if n < 2:
        raise InvalidParameter(f'relation polynomials need n >= 2, got {n}')
    if len(coefficients) != n - 1:
        raise InvalidParameter(f'expected {n - 1} coefficients for n={n}, got {len(coefficients)}')
    result = [0] * (2 * n)
    result[0] = 2 * sum(coefficients)
    for j, value in enumerate(coefficients, start=1):
        result[j] += value
        result[2 * n - j] += value
    return IntPolynomial(tuple(result))


def double_star_cubic(m: int) -> IntPolynomial:
    """x^3 - (m+6)x^2 + (4m+9)x - (m+4), the non-trivial factor for S(m, 2) pendants."""
    if m < 1:
        raise InvalidParameter(f'double star cubic needs m >= 1, got {m}')
    return IntPolynomial((-(m + 4), 4 * m + 9, -(m + 6), 1))


def cubic_reducibility(m: int) -> CubicFactor | None:
    cubic = double_star_cubic(m)
    constant = abs(cubic.coefficient(0))
    for d in divisors(constant):
        for root in (d, -d):
            if cubic.evaluate(root) == 0:
                quadratic, remainder = poly_divmod(cubic, IntPolynomial((-root, 1)))
                if not remainder.is_zero():
                    raise InvalidParameter(f'linear factor x - {root} did not divide {cubic}')
                return CubicFactor(root=root, quadratic=quadratic)
    return None


# Sturm sequences over the rationals, used to isolate real roots exactly.
def _rational_rem(f: tuple[Fraction, ...], g: tuple[Fraction, ...]) -> tuple[Fraction, ...]:
    remainder = list(f)
    while len(remainder) >= len(g) and remainder:
        factor = remainder[-1] / g[-1]
        shift = len(remainder) - len(g)
        for i, b in enumerate(g):
            remainder[shift + i] -= factor * b
        remainder = list(_normalize(remainder))
    return tuple(remainder)


def sturm_chain(poly: IntPolynomial) -> list[tuple[Fraction, ...]]:
    if poly.degree < 1:
        raise InvalidParameter(f'Sturm chain needs a non-constant polynomial, got {poly}')
    chain = [
        tuple(Fraction(c) for c in poly.coefficients),
        tuple(Fraction(c) for c in poly.derivative().coefficients),
    ]
    while len(chain[-1]) > 1:
        remainder = _rational_rem(chain[-2], chain[-1])
        if not remainder:
            break
        chain.append(tuple(-c for c in remainder))
    return chain


def _evaluate(coefficients: Sequence[Fraction], x: Fraction) -> Fraction:
    total = Fraction(0)
    for c in reversed(coefficients):
        total = total * x + c
    return total


def sign_variations(chain: Sequence[Sequence[Fraction]], x: Fraction) -> int:
    signs = [value > 0 for value in (_evaluate(p, x) for p in chain) if value != 0]
    return sum(1 for left, right in zip(signs, signs[1:]) if left != right)


def count_roots(chain: Sequence[Sequence[Fraction]], low: Fraction, high: Fraction) -> int:
    """Number of distinct real roots in the half-open interval (low, high]."""
    return sign_variations(chain, low) - sign_variations(chain, high)


def root_bound(poly: IntPolynomial) -> Fraction:
    lead = abs(poly.leading)
    return 1 + Fraction(max(abs(c) for c in poly.coefficients[:-1]), lead)


def isolate_real_roots(poly: IntPolynomial) -> list[tuple[Fraction, Fraction]]:
    """Disjoint intervals (low, high], each holding exactly one real root, ascending.

    Endpoints are rational, so the polynomial must not have rational roots on
    them; callers isolate polynomials without rational roots.
    """
    chain = sturm_chain(poly)
    bound = root_bound(poly)
    pending = [(-bound, bound)]
    isolated: list[tuple[Fraction, Fraction]] = []
    while pending:
        low, high = pending.pop()
        count = count_roots(chain, low, high)
        if count == 0:
            continue
        if count == 1:
            isolated.append((low, high))
            continue
        middle = (low + high) / 2
        pending.append((low, middle))
        pending.append((middle, high))
    return sorted(isolated)


def refine_root(poly: IntPolynomial, low: Fraction, high: Fraction, width: Fraction) -> tuple[Fraction, Fraction]:
    low_sign = poly.evaluate(low) > 0
    while high - low > width:
        middle = (low + high) / 2
        value = poly.evaluate(middle)
        if value == 0:
            return middle, middle
        if (value > 0) == low_sign:
            low = middle
        else:
            high = middle
    return low, high


def root_index(poly: IntPolynomial, low: Fraction, high: Fraction) -> int:
    """Ascending index of the unique root of poly isolated in (low, high]."""
    chain = sturm_chain(poly)
    if count_roots(chain, low, high) != 1:
        raise InvalidParameter(f'interval ({low}, {high}] does not isolate one root of {poly}')
    return count_roots(chain, -root_bound(poly), low)
