from __future__ import annotations

import cmath
import math
from typing import Any

from .algebra.algebraic import exact_linear_combination, is_zero, to_text
from .algebra.integers import factorize, gcd_combination, odd_part, prime_power, xgcd
from .errors import InternalInconsistency, InvalidParameter
from .graphs import double_star_centers, double_star_pendant_pair, laplacian, make_double_star
from .models import (
    DECISION_NONE,
    DECISION_NOT_COSPECTRAL,
    DECISION_PGST,
    DECISION_PROPER,
    PAIR_CENTERS,
    PAIR_EXTREMAL,
    PAIR_PENDANTS,
    SHAPE_BALANCED,
    SHAPE_PENDANT_PAIR,
    DoubleStarClassification,
    DoubleStarPair,
    LimitBlock,
    PGFRCertificate,
    RelationLattice,
    SupportPartition,
)
from .spectral import eigendecompose
from .support import (
    alternating_identity_vector,
    double_star_support_partition,
    odd_multiple_identity_vector,
    path_relation_holds,
    path_support_partition,
    relation_lattice_double_star,
    relation_lattice_path,
    same_degree_necessary,
    strong_cospectral,
)


PHENOMENON_PGST = 'pgst'
PHENOMENON_PGFR = 'pgfr'
PHENOMENON_NONE = 'none'

CLASSIFY_YES = 'yes'
CLASSIFY_NO = 'no'
CLASSIFY_NO_PAIR = 'no-pair'

LIMIT_SAMPLES = 8


def _verify_row(rl: RelationLattice, row: tuple[int, ...]) -> None:
    if not is_zero(exact_linear_combination(rl.exact_values, row)):
        raise InternalInconsistency(f'{row} is not an exact relation over indices {rl.support_indices}')


def _phi_minus_sum(row: tuple[int, ...], minus: list[bool]) -> int:
    return sum(value for value, negative in zip(row, minus) if negative)


def certify(sp: SupportPartition, rl: RelationLattice) -> PGFRCertificate:
    for label in rl.support_indices:
        if sp.sign_of.get(label, 0) == 0:
            raise InvalidParameter(f'lattice index {label} is outside the support of pair {sp.pair}')
    if not rl.verified:
        for row in rl.basis.rows:
            _verify_row(rl, row)
    minus = [sp.sign_of[label] == -1 for label in rl.support_indices]
    sums = [_phi_minus_sum(row, minus) for row in rl.basis.rows]
    g, coefficients = gcd_combination(sums)
    witness = None
    if g == 1:
        witness = tuple(
            sum(c * row[i] for c, row in zip(coefficients, rl.basis.rows))
            for i in range(rl.basis.cols)
        )
        if _phi_minus_sum(witness, minus) != 1:
            raise InternalInconsistency(f'witness {witness} does not have odd-part sum 1')
        _verify_row(rl, witness)
        decision = DECISION_NONE
    elif g == 0 or g % 2 == 0:
        decision = DECISION_PGST
    else:
        decision = DECISION_PROPER
    return PGFRCertificate(decision=decision, gcd_value=g, witness=witness, partition=sp, lattice=rl)


def not_cospectral_certificate() -> PGFRCertificate:
    return PGFRCertificate(decision=DECISION_NOT_COSPECTRAL, gcd_value=0, witness=None)


def certify_path(n: int, a: int) -> PGFRCertificate:
    if n < 1 or not 1 <= a <= n:
        raise InvalidParameter(f'vertex {a} out of range for P_{n}')
    if 2 * a == n + 1:
        return not_cospectral_certificate()
    sp = path_support_partition(n, a)
    return certify(sp, relation_lattice_path(n, sp))


def _certify_pendant_pair(m: int) -> PGFRCertificate:
    sp = double_star_support_partition(m, SHAPE_PENDANT_PAIR)
    return certify(sp, relation_lattice_double_star(m, SHAPE_PENDANT_PAIR, sp))


def _numeric_pair(m: int, n: int, a: int, b: int) -> SupportPartition | None:
    graph = make_double_star(m, n)
    if not same_degree_necessary(graph, a, b):
        return None
    return strong_cospectral(eigendecompose(laplacian(graph)), a, b)


def certify_double_star(m: int, n: int, pair: str) -> PGFRCertificate:
    if m < 1 or n < 1:
        raise InvalidParameter(f'double star needs m, n >= 1, got m={m}, n={n}')
    if pair == PAIR_CENTERS:
        if m == n:
            sp = double_star_support_partition(m, SHAPE_BALANCED)
            return certify(sp, relation_lattice_double_star(m, SHAPE_BALANCED, sp))
        a, b = double_star_centers(m, n)
        if _numeric_pair(m, n, a, b) is not None:
            raise InternalInconsistency(f'centers of S({m}, {n}) look strongly cospectral')
        return not_cospectral_certificate()
    if pair == PAIR_PENDANTS:
        if n == 2:
            return _certify_pendant_pair(m)
        if m == 2:
            return _certify_pendant_pair(n)
        a, b = double_star_pendant_pair(m, n)
        if _numeric_pair(m, n, a, b) is not None:
            raise InternalInconsistency(f'pendants ({a}, {b}) of S({m}, {n}) look strongly cospectral')
        return not_cospectral_certificate()
    if pair == PAIR_EXTREMAL:
        if (m, n) != (1, 1):
            raise InvalidParameter(f'only S(1, 1) has an extremal pair, got S({m}, {n})')
        return certify_path(4, 1)
    raise InvalidParameter(f'unknown double star pair {pair!r}')


def classify_path(n: int, a: int) -> str:
    if n < 1 or not 1 <= a <= n:
        raise InvalidParameter(f'vertex {a} out of range for P_{n}')
    if 2 * a == n + 1:
        return CLASSIFY_NO_PAIR
    if prime_power(n) is not None:
        return CLASSIFY_YES
    if n % 2 == 0:
        half = prime_power(n // 2)
        if half is not None and half[0] != 2:
            power = half[0] ** half[1]
            return CLASSIFY_YES if 2 * a - 1 in (power, 3 * power) else CLASSIFY_NO
    return CLASSIFY_NO


def classify_double_star(m: int, n: int) -> DoubleStarClassification:
    if m < 1 or n < 1:
        raise InvalidParameter(f'double star needs m, n >= 1, got m={m}, n={n}')
    pairs: list[DoubleStarPair] = []
    if m == n:
        pairs.append(DoubleStarPair(PAIR_CENTERS, double_star_centers(m, n), PHENOMENON_PGST))
    if (m, n) == (1, 1):
        pairs.append(DoubleStarPair(PAIR_EXTREMAL, (1, 4), PHENOMENON_PGST))
    elif (m, n) == (2, 2):
        pairs.append(DoubleStarPair(PAIR_PENDANTS, double_star_pendant_pair(m, n), PHENOMENON_NONE))
    elif 2 in (m, n):
        pairs.append(DoubleStarPair(PAIR_PENDANTS, double_star_pendant_pair(m, n), PHENOMENON_PGFR))
    return DoubleStarClassification(m=m, n=n, pairs=tuple(pairs))


def _add(vector: list[int], other: tuple[int, ...], scale: int = 1) -> None:
    for i, value in enumerate(other):
        vector[i] += scale * value


def _negative_relation(n: int, a: int) -> list[int]:
    vector = [0] * (n - 1)
    if n % 2 == 0:
        exponent, odd = odd_part(n)
        if exponent >= 2:
            # n = 2^e * m with m odd: shifts 1 and 2 of the alternating identity
            _add(vector, alternating_identity_vector(n, 2 ** exponent, odd, 1)[0])
            _add(vector, alternating_identity_vector(n, 2 ** exponent, odd, 2)[0], -1)
            return vector
        half = prime_power(odd)
        if half is not None:
            p, power = half[0], half[0] ** half[1]
            if half[1] == 1:
                _add(vector, alternating_identity_vector(n, 2, p, 0)[0])
                vector[p - 1] += 1
            else:
                _add(vector, alternating_identity_vector(n, 2 * power // p, p, 2)[0])
                vector[power - 1] -= 1
            return vector
        factors = factorize(odd)
        p = min(factors)
        h = p ** factors[p]
        q = odd // h
        _, s, t = xgcd(q, h)
        vector[h * q - 1] += 1
        _add(vector, odd_multiple_identity_vector(n, 2 * h, q)[0], -2 * s)
        _add(vector, odd_multiple_identity_vector(n, 2 * q, h)[0], -2 * t)
        return vector
    factors = factorize(n)
    big = next(p ** e for p, e in sorted(factors.items()) if (2 * a - 1) % (p ** e))
    other = next(p ** e for p, e in sorted(factors.items()) if p ** e != big)
    quotient = n // big
    _, s, t = xgcd(big, other)
    _add(vector, alternating_identity_vector(n, big, quotient, 1)[0])
    _add(vector, alternating_identity_vector(n, big, quotient, 2)[0])
    _add(vector, odd_multiple_identity_vector(n, quotient, big)[0], -4 * s)
    _add(vector, odd_multiple_identity_vector(n, n // other, other)[0], -4 * t)
    return vector


def negative_witness_path(n: int, a: int) -> tuple[int, ...]:
    """Relation l_1..l_(n-1) among path eigenvalues whose odd-sign part sums to +-1."""
    if classify_path(n, a) != CLASSIFY_NO:
        raise InvalidParameter(f'P_{n} with a={a} is not a negative instance')
    vector = _negative_relation(n, a)
    if not path_relation_holds(n, vector):
        raise InternalInconsistency(f'witness for P_{n}, a={a} is not an exact relation')
    sp = path_support_partition(n, a)
    if any(vector[r - 1] for r in sp.phi0 if r):
        raise InternalInconsistency(f'witness for P_{n}, a={a} touches a vanishing eigenvalue')
    if abs(sum(vector[r - 1] for r in sp.phi_minus)) != 1:
        raise InternalInconsistency(f'witness for P_{n}, a={a} does not have odd-part sum +-1')
    return tuple(vector)


def limit_blocks(cert: PGFRCertificate, samples: int = LIMIT_SAMPLES) -> tuple[LimitBlock, ...]:
    """2x2 limits reachable on the pair; the full circle of phases is sampled when gcd is 0."""
    if cert.decision == DECISION_NOT_COSPECTRAL:
        raise InvalidParameter('no limit blocks without a strongly cospectral pair')
    count = cert.gcd_value if cert.gcd_value else samples
    blocks = []
    for k in range(count):
        angle = 2 * math.pi * k / count
        gamma = cmath.exp(1j * angle)
        diagonal = (1 + gamma) / 2
        off = (1 - gamma) / 2
        blocks.append(LimitBlock(
            angle=angle,
            cross=math.sin(math.pi * k / count) ** 2,
            block=((diagonal, off), (off, diagonal)),
        ))
    return tuple(blocks)


def certificate_payload(cert: PGFRCertificate, *, dump_lattice: bool = False) -> dict[str, Any]:
    payload: dict[str, Any] = {
        'decision': cert.decision,
        'gcd': cert.gcd_value,
        'witness': list(cert.witness) if cert.witness is not None else None,
        'support': None,
        'basis': [],
    }
    if cert.partition is not None:
        payload['support'] = {
            'phi0': list(cert.partition.phi0),
            'phi_plus': list(cert.partition.phi_plus),
            'phi_minus': list(cert.partition.phi_minus),
        }
    if cert.lattice is not None:
        payload['basis'] = [list(row) for row in cert.lattice.basis.rows]
        if dump_lattice:
            payload['lattice'] = {
                'indices': list(cert.lattice.support_indices),
                'values': [to_text(value) for value in cert.lattice.exact_values],
            }
    return payload
