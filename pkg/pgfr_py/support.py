from __future__ import annotations

import math
from collections.abc import Sequence
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np

from .algebra.algebraic import (
    Rational,
    Surd,
    approximate,
    exact_linear_combination,
    is_zero,
)
from .algebra.lattice import integer_kernel
from .algebra.polynomials import IntPolynomial, cyclotomic, double_star_cubic, reduce_mod, relation_poly
from .errors import InternalInconsistency, InvalidParameter
from .graphs import double_star_centers
from .models import (
    SHAPE_BALANCED,
    SHAPE_PENDANT_PAIR,
    Graph,
    IntMatrix,
    RelationLattice,
    SpectralDecomposition,
    SupportPartition,
)
from .spectral import double_star_spectrum, path_eigenvalue_exact


DEFAULT_COSPECTRAL_TOL = 1e-8
CUBIC_RELATION_TOL = 1e-20


def _check_pair(order: int, a: int, b: int) -> None:
    if not (1 <= a <= order and 1 <= b <= order):
        raise InvalidParameter(f'vertices ({a}, {b}) out of range 1..{order}')
    if a == b:
        raise InvalidParameter(f'a strongly cospectral pair needs two distinct vertices, got {a} twice')


def strong_cospectral(sd: SpectralDecomposition, a: int, b: int, tol: float = DEFAULT_COSPECTRAL_TOL) -> SupportPartition | None:
    _check_pair(sd.order, a, b)
    signs: dict[int, int] = {}
    for label, projector in zip(sd.labels, sd.projectors):
        column_a = projector[:, a - 1]
        column_b = projector[:, b - 1]
        scale = max(1.0, float(np.max(np.sum(np.abs(projector), axis=1))))
        if np.linalg.norm(column_a) < tol and np.linalg.norm(column_b) < tol:
            signs[label] = 0
        elif np.linalg.norm(column_a - column_b) < tol * scale:
            signs[label] = 1
        elif np.linalg.norm(column_a + column_b) < tol * scale:
            signs[label] = -1
        else:
            return None
    return SupportPartition(pair=(a, b), sign_of=signs)


def same_degree_necessary(graph: Graph, a: int, b: int) -> bool:
    _check_pair(graph.vertex_count, a, b)
    return graph.degree(a) == graph.degree(b)


def path_support_partition(n: int, a: int) -> SupportPartition:
    if not 1 <= a <= n:
        raise InvalidParameter(f'vertex {a} out of range 1..{n}')
    b = n + 1 - a
    if a == b:
        raise InvalidParameter(f'vertex {a} is the center of P_{n} and has no mirror partner')
    signs = {0: 1}
    for r in range(1, n):
        if (2 * a - 1) * r % (2 * n) == 0:
            signs[r] = 0
        else:
            signs[r] = 1 if (n + r) % 2 == 0 else -1
    return SupportPartition(pair=(a, b), sign_of=signs)


def double_star_support_partition(m: int, shape: str) -> SupportPartition:
    """Sign pattern of the designated pair, keyed by ascending eigenvalue position."""
    if m < 1:
        raise InvalidParameter(f'double star needs m >= 1, got {m}')
    if shape == SHAPE_BALANCED:
        # 0, mu-, [1,] m+1, mu+
        pattern = [1, -1] + ([0] if m >= 2 else []) + [1, -1]
        return SupportPartition(pair=double_star_centers(m, m), sign_of=dict(enumerate(pattern)))
    if shape == SHAPE_PENDANT_PAIR:
        sd = double_star_spectrum(m, shape)
        signs = {
            position: (-1 if exact == Rational(Fraction(1)) else 1)
            for position, exact in enumerate(sd.exact_values)
        }
        return SupportPartition(pair=(1, 2), sign_of=signs)
    raise InvalidParameter(f'unknown double star shape {shape!r}')


def _support(sp: SupportPartition) -> tuple[int, ...]:
    return tuple(label for label in sorted(sp.sign_of) if label != 0 and sp.sign_of[label] != 0)


def path_relation_holds(n: int, coefficients: Sequence[int], value: int = 0) -> bool:
    """True when sum l_j * mu_j == value exactly, with l indexed by j = 1..n-1."""
    poly = relation_poly(n, coefficients) - IntPolynomial((value,))
    return reduce_mod(poly, cyclotomic(2 * n)).is_zero()


@lru_cache(maxsize=None)
def _path_lattice(n: int, support: tuple[int, ...]) -> RelationLattice:
    values = tuple(path_eigenvalue_exact(n, r) for r in support)
    width = cyclotomic(2 * n).degree
    rows = tuple(tuple(int(c) for c in value.residue) for value in values)
    basis = integer_kernel(IntMatrix(rows=rows, cols=width))
    for row in basis.rows:
        full = [0] * (n - 1)
        for label, coefficient in zip(support, row):
            full[label - 1] = coefficient
        if not path_relation_holds(n, full):
            raise InternalInconsistency(f'kernel row {row} is not a relation among path eigenvalues for n={n}')
    return RelationLattice(support_indices=support, basis=basis, exact_values=values, verified=True)


def relation_lattice_path(n: int, sp: SupportPartition) -> RelationLattice:
    if n < 2:
        raise InvalidParameter(f'relation lattices need n >= 2, got {n}')
    return _path_lattice(n, _support(sp))


def _surd_rows(values: Sequence) -> tuple[tuple[int, ...], ...]:
    radicands = {value.radicand for value in values if isinstance(value, Surd)}
    if len(radicands) > 1:
        raise InternalInconsistency(f'eigenvalues span several quadratic fields {sorted(radicands)}')
    pairs = []
    for value in values:
        if isinstance(value, Surd):
            pairs.append((value.a, value.b))
        elif isinstance(value, Rational):
            pairs.append((value.value, Fraction(0)))
        else:
            raise InternalInconsistency(f'unexpected eigenvalue representation {value!r}')
    denominator = 1
    for a, b in pairs:
        denominator = math.lcm(denominator, a.denominator, b.denominator)
    return tuple((int(a * denominator), int(b * denominator)) for a, b in pairs)


def _cubic_lattice(m: int, support: tuple[int, ...], values: tuple) -> IntMatrix:
    # 1, r0, r1 are independent over Q for an irreducible cubic, so the
    # relations are spanned by the trace identity r0 + r1 + r2 = m + 6.
    row = tuple(-(m + 6) if value == Rational(Fraction(1)) else 1 for value in values)
    with mpmath.workdps(40):
        roots = mpmath.polyroots(list(reversed(double_star_cubic(m).coefficients)), maxsteps=200, extraprec=80)
        residual = abs(sum(root.real for root in roots) - (m + 6))
    if residual > CUBIC_RELATION_TOL:
        raise InternalInconsistency(f'trace relation for the S({m}, 2) cubic fails numerically ({residual})')
    return IntMatrix(rows=(row,), cols=len(support))


@lru_cache(maxsize=None)
def _double_star_lattice(m: int, shape: str, support: tuple[int, ...]) -> RelationLattice:
    sd = double_star_spectrum(m, shape)
    values = tuple(sd.exact_values[label] for label in support)
    if shape == SHAPE_PENDANT_PAIR and m != 2:
        basis = _cubic_lattice(m, support, values)
    else:
        basis = integer_kernel(IntMatrix(rows=_surd_rows(values), cols=2))
    for row in basis.rows:
        if not is_zero(exact_linear_combination(values, row)):
            raise InternalInconsistency(f'lattice row {row} is not an exact relation for S({m}) {shape}')
        with mpmath.workdps(40):
            residual = abs(sum(coefficient * approximate(value, 30) for coefficient, value in zip(row, values)))
        if residual > CUBIC_RELATION_TOL:
            raise InternalInconsistency(f'lattice row {row} fails numerically ({residual})')
    return RelationLattice(support_indices=support, basis=basis, exact_values=values, verified=True)


def relation_lattice_double_star(m: int, shape: str, sp: SupportPartition) -> RelationLattice:
    if m < 1:
        raise InvalidParameter(f'double star needs m >= 1, got {m}')
    if shape not in (SHAPE_BALANCED, SHAPE_PENDANT_PAIR):
        raise InvalidParameter(f'unknown double star shape {shape!r}')
    return _double_star_lattice(m, shape, _support(sp))


def alternating_identity_vector(n: int, k: int, m: int, s: int) -> tuple[tuple[int, ...], int]:
    """Coefficients l_1..l_(n-1) and the integer value of sum l_j * mu_j for n = k * m, m odd."""
    if k < 1 or m < 3 or m % 2 == 0 or n != k * m:
        raise InvalidParameter(f'need n = k * m with m odd and >= 3, got n={n}, k={k}, m={m}')
    if not 0 <= s <= k - 1:
        raise InvalidParameter(f'shift s must lie in 0..{k - 1}, got {s}')
    coefficients = [0] * (n - 1)
    if s == 0:
        for j in range(1, m):
            coefficients[k * j - 1] += (-1) ** j
        return tuple(coefficients), -2
    for j in range(m):
        coefficients[k * j + s - 1] += (-1) ** j
    return tuple(coefficients), 2


def odd_multiple_identity_vector(n: int, k: int, m: int) -> tuple[tuple[int, ...], int]:
    """sum over j < (m-1)/2 of mu_((2j+1)k) equals m when n = k * m with m odd."""
    if k < 1 or m < 3 or m % 2 == 0 or n != k * m:
        raise InvalidParameter(f'need n = k * m with m odd and >= 3, got n={n}, k={k}, m={m}')
    coefficients = [0] * (n - 1)
    for j in range((m - 1) // 2):
        coefficients[(2 * j + 1) * k - 1] += 1
    return tuple(coefficients), m
