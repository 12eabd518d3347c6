from __future__ import annotations

import math
from fractions import Fraction

import mpmath
import numpy as np

from .algebra.algebraic import Rational, cubic_roots, cyclotomic_element, make_surd, rational, to_float
from .algebra.polynomials import IntPolynomial, cubic_reducibility, double_star_cubic
from .errors import InternalInconsistency, InvalidParameter, NumericFailure
from .models import SHAPE_BALANCED, SHAPE_PENDANT_PAIR, LaplacianMatrix, SpectralDecomposition, WalkSnapshot


DEFAULT_DEDUP_TOL = 1e-8
JACOBI_RELATIVE_TOL = 1e-14
JACOBI_MAX_SWEEPS = 100
INVARIANT_TOL = 1e-9


def _off_diagonal_norm(a: np.ndarray) -> float:
    return float(np.linalg.norm(a - np.diag(np.diag(a))))


def jacobi_eigh(matrix: np.ndarray, *, max_sweeps: int = JACOBI_MAX_SWEEPS) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi rotations; returns (eigenvalues, eigenvector columns), unsorted."""
    a = np.array(matrix, dtype=float, copy=True)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InvalidParameter(f'expected a square matrix, got shape {a.shape}')
    if a.shape[0] and float(np.max(np.abs(a - a.T))) > 1e-12 * max(1.0, float(np.max(np.abs(a)))):
        raise InvalidParameter('matrix is not symmetric')
    n = a.shape[0]
    v = np.identity(n)
    threshold = JACOBI_RELATIVE_TOL * max(float(np.linalg.norm(a)), 1.0)
    off = _off_diagonal_norm(a)
    for sweep in range(max_sweeps):
        if off <= threshold:
            return np.diag(a).copy(), v
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                phi = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = 1.0 / (abs(phi) + math.sqrt(phi * phi + 1.0))
                if phi < 0.0:
                    t = -t
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                a[p, q] = a[q, p] = 0.0
                vec_p = v[:, p].copy()
                vec_q = v[:, q].copy()
                v[:, p] = c * vec_p - s * vec_q
                v[:, q] = s * vec_p + c * vec_q
        off = _off_diagonal_norm(a)
    if off <= threshold:
        return np.diag(a).copy(), v
    raise NumericFailure(
        f'Jacobi rotations did not converge after {max_sweeps} sweeps (off-diagonal {off:.3e})',
        iterations=max_sweeps,
        off_diagonal=off,
    )


def _as_array(matrix: LaplacianMatrix | np.ndarray) -> np.ndarray:
    if isinstance(matrix, LaplacianMatrix):
        return matrix.to_array()
    return np.asarray(matrix, dtype=float)


def eigendecompose(matrix: LaplacianMatrix | np.ndarray, dedup_tol: float = DEFAULT_DEDUP_TOL) -> SpectralDecomposition:
    if dedup_tol <= 0:
        raise InvalidParameter(f'dedup_tol must be positive, got {dedup_tol}')
    values, vectors = jacobi_eigh(_as_array(matrix))
    order = np.argsort(values, kind='stable')
    values = values[order]
    vectors = vectors[:, order]
    clusters: list[list[int]] = []
    for index, value in enumerate(values):
        if clusters and value - values[clusters[-1][-1]] <= dedup_tol:
            clusters[-1].append(index)
        else:
            clusters.append([index])
    eigenvalues = []
    projectors = []
    for cluster in clusters:
        value = float(np.mean(values[cluster]))
        if abs(value) <= dedup_tol:
            value = 0.0
        basis = vectors[:, cluster]
        eigenvalues.append(value)
        projectors.append(basis @ basis.T)
    return SpectralDecomposition(
        eigenvalues=tuple(eigenvalues),
        projectors=tuple(projectors),
        labels=tuple(range(len(eigenvalues))),
    )


def _projector(vector: np.ndarray) -> np.ndarray:
    return np.outer(vector, vector) / float(vector @ vector)


def path_eigenvalue_exact(n: int, r: int):
    """mu_r = 2 + w^r + w^(2n-r) with w = exp(i*pi/n); mu_0 is 0."""
    if r == 0:
        return rational(0)
    return cyclotomic_element(2 * n, IntPolynomial.monomial(0, 2) + IntPolynomial.monomial(r) + IntPolynomial.monomial(2 * n - r))


def path_spectrum(n: int) -> SpectralDecomposition:
    if n < 1:
        raise InvalidParameter(f'path order must be >= 1, got {n}')
    labels = (0,) + tuple(range(n - 1, 0, -1))
    j = np.arange(1, n + 1)
    eigenvalues = []
    projectors = []
    for r in labels:
        k = 0 if r == 0 else n - r
        eigenvalues.append(0.0 if r == 0 else 2.0 + 2.0 * math.cos(r * math.pi / n))
        projectors.append(_projector(np.cos((2 * j - 1) * k * math.pi / (2 * n))))
    return SpectralDecomposition(
        eigenvalues=tuple(eigenvalues),
        projectors=tuple(projectors),
        labels=labels,
        exact_values=tuple(path_eigenvalue_exact(n, r) for r in labels),
    )


def _assemble(order: int, pieces: list[tuple[float, object, np.ndarray]]) -> SpectralDecomposition:
    remainder = np.identity(order) - sum(projector for _, _, projector in pieces if projector is not None)
    entries = []
    for value, exact, projector in pieces:
        entries.append((value, exact, remainder if projector is None else projector))
    entries.sort(key=lambda item: item[0])
    return SpectralDecomposition(
        eigenvalues=tuple(item[0] for item in entries),
        projectors=tuple(item[2] for item in entries),
        labels=tuple(range(len(entries))),
        exact_values=tuple(item[1] for item in entries),
    )


def _balanced_spectrum(m: int) -> SpectralDecomposition:
    order = 2 * m + 2
    pieces: list[tuple[float, object, np.ndarray | None]] = [(0.0, rational(0), np.full((order, order), 1.0 / order))]
    symmetric = np.ones(order)
    symmetric[m] = symmetric[m + 1] = -m
    pieces.append((float(m + 1), rational(m + 1), _projector(symmetric)))
    radicand = m * m + 6 * m + 1
    for sign in (-1, 1):
        exact = make_surd(Fraction(m + 3, 2), Fraction(sign, 2), radicand)
        value = to_float(exact)
        antisymmetric = np.empty(order)
        antisymmetric[:m] = 1.0
        antisymmetric[m] = 1.0 - value
        antisymmetric[m + 1] = -(1.0 - value)
        antisymmetric[m + 2:] = -1.0
        pieces.append((value, exact, _projector(antisymmetric)))
    if m >= 2:
        pieces.append((1.0, rational(1), None))
    return _assemble(order, pieces)


def _pendant_vector(theta: float, m: int) -> np.ndarray:
    tail = theta * theta - 4.0 * theta + 1.0
    return np.array([1.0, 1.0, 1.0 - theta, tail] + [tail / (1.0 - theta)] * m)


def _pendant_pair_spectrum(m: int) -> SpectralDecomposition:
    order = m + 4
    pieces: list[tuple[float, object, np.ndarray | None]] = [(0.0, rational(0), np.full((order, order), 1.0 / order))]
    cubic = double_star_cubic(m)
    factor = cubic_reducibility(m)
    if m == 2:
        if factor is None:
            raise InternalInconsistency('x^3 - 8x^2 + 17x - 6 should have the root 3')
        roots = [rational(factor.root)]
        b, a = factor.quadratic.coefficient(1), factor.quadratic.coefficient(0)
        # x^2 + b x + a with roots (-b +- sqrt(b^2 - 4a)) / 2
        for sign in (-1, 1):
            roots.append(make_surd(Fraction(-b, 2), Fraction(sign, 2), b * b - 4 * a))
    else:
        if factor is not None:
            raise InternalInconsistency(f'{cubic} unexpectedly has the rational root {factor.root}')
        roots = list(cubic_roots(cubic))
    for exact in roots:
        pieces.append((to_float(exact), exact, _projector(_pendant_vector(to_float(exact), m))))
    pieces.append((1.0, rational(1), None))
    decomposition = _assemble(order, pieces)
    _check_cubic_numerically(cubic, [to_float(exact) for exact in roots])
    return decomposition


def _check_cubic_numerically(cubic: IntPolynomial, roots: list[float]) -> None:
    with mpmath.workdps(40):
        reference = sorted(float(root.real) for root in mpmath.polyroots(list(reversed(cubic.coefficients)), maxsteps=200, extraprec=80))
    for expected, found in zip(reference, sorted(roots)):
        if abs(expected - found) > 1e-12:
            raise InternalInconsistency(f'root {found!r} of {cubic} disagrees with {expected!r}')


def double_star_spectrum(m: int, shape: str) -> SpectralDecomposition:
    """Closed-form spectrum of S(m, m) (shape balanced) or S(m, 2) (shape pendant-pair)."""
    if m < 1:
        raise InvalidParameter(f'double star needs m >= 1, got {m}')
    if shape == SHAPE_BALANCED:
        return _balanced_spectrum(m)
    if shape == SHAPE_PENDANT_PAIR:
        return _pendant_pair_spectrum(m)
    raise InvalidParameter(f'unknown double star shape {shape!r}')


def check_invariants(sd: SpectralDecomposition, matrix: LaplacianMatrix | np.ndarray | None = None, tol: float = INVARIANT_TOL) -> None:
    order = sd.order
    identity = np.identity(order)
    if any(b <= a for a, b in zip(sd.eigenvalues, sd.eigenvalues[1:])):
        raise NumericFailure('eigenvalues are not strictly ascending')
    total = sum(sd.projectors)
    if float(np.max(np.abs(total - identity))) > tol:
        raise NumericFailure('projectors do not sum to the identity')
    for i, first in enumerate(sd.projectors):
        if float(np.max(np.abs(first @ first - first))) > tol:
            raise NumericFailure(f'projector at position {i} is not idempotent')
        for second in sd.projectors[i + 1:]:
            if float(np.max(np.abs(first @ second))) > tol:
                raise NumericFailure(f'projector at position {i} is not orthogonal to a later one')
    if matrix is not None:
        rebuilt = sum(value * projector for value, projector in zip(sd.eigenvalues, sd.projectors))
        if float(np.max(np.abs(rebuilt - _as_array(matrix)))) > tol * max(1.0, float(np.max(np.abs(sd.eigenvalues)))):
            raise NumericFailure('spectral sum does not reproduce the matrix')


def transition_matrix(sd: SpectralDecomposition, t: float) -> WalkSnapshot:
    phases = np.exp(-1j * t * np.array(sd.eigenvalues))
    matrix = np.tensordot(phases, sd.stacked(), axes=1)
    return WalkSnapshot(time=float(t), matrix=matrix)
