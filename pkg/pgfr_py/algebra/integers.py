from __future__ import annotations

import math
from collections.abc import Sequence

from ..errors import InvalidParameter


def is_perfect_square(k: int) -> bool:
    if k < 0:
        return False
    root = math.isqrt(k)
    return root * root == k


def factorize(n: int) -> dict[int, int]:
    if n < 1:
        raise InvalidParameter(f'cannot factor {n}')
    factors: dict[int, int] = {}
    remaining = n
    p = 2
    while p * p <= remaining:
        while remaining % p == 0:
            factors[p] = factors.get(p, 0) + 1
            remaining //= p
        p += 1 if p == 2 else 2
    if remaining > 1:
        factors[remaining] = factors.get(remaining, 0) + 1
    return factors


def prime_power(n: int) -> tuple[int, int] | None:
    if n < 2:
        raise InvalidParameter(f'prime_power expects n >= 2, got {n}')
    factors = factorize(n)
    if len(factors) != 1:
        return None
    (p, exponent), = factors.items()
    return p, exponent


def odd_part(n: int) -> tuple[int, int]:
    """Split n = 2**e * m with m odd and return (e, m)."""
    if n < 1:
        raise InvalidParameter(f'odd_part expects n >= 1, got {n}')
    exponent = 0
    while n % 2 == 0:
        n //= 2
        exponent += 1
    return exponent, n


def euler_phi(n: int) -> int:
    result = n
    for p in factorize(n):
        result -= result // p
    return result


def divisors(n: int) -> list[int]:
    small = [d for d in range(1, math.isqrt(n) + 1) if n % d == 0]
    large = [n // d for d in reversed(small) if d * d != n]
    return small + large


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    # x * a + y * b == g, carried along the Euclidean algorithm
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    if g < 0:
        x, y, g = -x, -y, -g
    return g, x, y


def gcd_combination(values: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    """Return g = gcd(values) >= 0 and integer coefficients c with sum(c * v) == g."""
    g = 0
    coefficients: list[int] = []
    for value in values:
        g_next, x, y = xgcd(g, value)
        coefficients = [c * x for c in coefficients]
        coefficients.append(y)
        g = g_next
    return g, tuple(coefficients)
