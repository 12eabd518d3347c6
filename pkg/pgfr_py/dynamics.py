from __future__ import annotations

import dataclasses
import math
from collections.abc import Mapping, Sequence

import mpmath
import numpy as np

from .errors import InfeasibleTarget, InvalidParameter
from .models import PhaseTarget, RelationLattice, RevivalReport, SpectralDecomposition, SupportPartition
from .spectral import transition_matrix


DEFAULT_EPS = 1e-2
DEFAULT_GRID_POINTS = 20001
DEFAULT_REFINE_STEPS = 60
PROPER_DELTA = 0.01
HORIZON_PERIODS = 200
GRID_CHUNK = 8192

DEFAULT_PHASE_BUDGET = 2_000_000
PHASE_FALLBACK_POINTS = 4096
PHASE_FALLBACK_SEEDS = 16
GOLDEN_STEPS = 80
ZERO_EIGENVALUE_TOL = 1e-12

TWO_PI = 2.0 * math.pi
GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def _check_pair(sd: SpectralDecomposition, a: int, b: int) -> None:
    if not (1 <= a <= sd.order and 1 <= b <= sd.order):
        raise InvalidParameter(f'vertices ({a}, {b}) out of range 1..{sd.order}')
    if a == b:
        raise InvalidParameter(f'revival needs two distinct vertices, got {a} twice')


def _metrics(block: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    at_a = np.abs(block[..., 0, 0]) ** 2
    cross = np.abs(block[..., 1, 0]) ** 2
    leakage = np.clip(1.0 - at_a - cross, 0.0, 1.0)
    return at_a, cross, leakage


def revival_report(sd: SpectralDecomposition, a: int, b: int, t: float) -> RevivalReport:
    _check_pair(sd, a, b)
    u = transition_matrix(sd, t).matrix
    index = [a - 1, b - 1]
    block = u[np.ix_(index, index)]
    at_a, cross, leakage = _metrics(block)
    return RevivalReport(
        time=float(t),
        at_a=float(at_a),
        cross=float(cross),
        leakage=float(leakage),
        block_phases=np.angle(block),
        min_leakage_time=float(t),
        min_leakage=float(leakage),
    )


def pair_block(sd: SpectralDecomposition, a: int, b: int, times: Sequence[float] | np.ndarray | float) -> np.ndarray:
    """2x2 restriction of U(t) to (a, b) for every time, shape (len(times), 2, 2)."""
    _check_pair(sd, a, b)
    index = [a - 1, b - 1]
    restricted = sd.stacked()[:, index][:, :, index]
    phases = np.exp(-1j * np.outer(np.atleast_1d(np.asarray(times, dtype=float)), np.array(sd.eigenvalues)))
    return np.einsum('td,dij->tij', phases, restricted)


def default_horizon(sd: SpectralDecomposition) -> float:
    gaps = np.diff(np.array(sd.eigenvalues))
    gaps = gaps[gaps > 0]
    if not gaps.size:
        raise InvalidParameter('a single eigenvalue has no recurrence time scale')
    return HORIZON_PERIODS * TWO_PI / float(np.min(gaps))


def default_step(sd: SpectralDecomposition) -> float:
    return default_horizon(sd) / (DEFAULT_GRID_POINTS - 1)


def _metrics_at(sd: SpectralDecomposition, a: int, b: int, times: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    count = len(times)
    at_a = np.empty(count)
    cross = np.empty(count)
    leakage = np.empty(count)
    for start in range(0, count, GRID_CHUNK):
        stop = min(start + GRID_CHUNK, count)
        at_a[start:stop], cross[start:stop], leakage[start:stop] = _metrics(pair_block(sd, a, b, times[start:stop]))
    return at_a, cross, leakage


def leakage_scan(
    sd: SpectralDecomposition,
    a: int,
    b: int,
    horizon: float,
    step: float | None = None,
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """(times, at_a, cross, leakage) on the grid k * step covering [0, horizon]."""
    if horizon <= 0:
        raise InvalidParameter(f'horizon must be positive, got {horizon}')
    step = default_step(sd) if step is None else step
    if step <= 0:
        raise InvalidParameter(f'grid step must be positive, got {step}')
    count = int(math.floor(horizon / step + 1e-9)) + 1
    times = np.arange(count) * step
    at_a, cross, leakage = _metrics_at(sd, a, b, times)
    return times, at_a, cross, leakage


def _ternary_refine(
    sd: SpectralDecomposition,
    a: int,
    b: int,
    low: np.ndarray,
    high: np.ndarray,
    steps: int,
) -> np.ndarray:
    """Shrink every bracket [low_i, high_i] towards a leakage minimum, all brackets at once."""
    low = np.array(low, dtype=float)
    high = np.array(high, dtype=float)
    size = len(low)
    for _ in range(steps):
        left = low + (high - low) / 3.0
        right = high - (high - low) / 3.0
        leakage = _metrics_at(sd, a, b, np.concatenate([left, right]))[2]
        keep_left = leakage[:size] <= leakage[size:]
        high = np.where(keep_left, right, high)
        low = np.where(keep_left, low, left)
    return (low + high) / 2.0


def search_revival(
    sd: SpectralDecomposition,
    a: int,
    b: int,
    eps: float = DEFAULT_EPS,
    horizon: float | None = None,
    refine_steps: int = DEFAULT_REFINE_STEPS,
    *,
    step: float | None = None,
    delta: float = PROPER_DELTA,
) -> RevivalReport:
    """Best non-trivial revival on [0, horizon].

    Times with cross <= delta are ignored. Among the rest, a time with leakage
    below eps and the largest cross wins; failing that, the smallest leakage.
    The report also carries the least leaky candidate, which can only improve
    as the horizon grows: the grid of a longer horizon extends the shorter one
    and every interior local minimum of the grid is refined.
    """
    _check_pair(sd, a, b)
    if eps <= 0:
        raise InvalidParameter(f'eps must be positive, got {eps}')
    horizon = default_horizon(sd) if horizon is None else horizon
    times, _, cross, leakage = leakage_scan(sd, a, b, horizon, step)

    interior = np.arange(1, len(times) - 1)
    if interior.size:
        middle = leakage[1:-1]
        is_minimum = (middle <= leakage[:-2]) & (middle <= leakage[2:]) & (cross[1:-1] > delta)
        minima = interior[is_minimum]
    else:
        minima = interior
    refined = _ternary_refine(sd, a, b, times[minima - 1], times[minima + 1], refine_steps)

    eligible = cross > delta
    pool = [(times[eligible], cross[eligible], leakage[eligible])]
    if refined.size:
        _, refined_cross, refined_leakage = _metrics_at(sd, a, b, refined)
        keep = refined_cross > delta
        pool.append((refined[keep], refined_cross[keep], refined_leakage[keep]))
    pool_times, pool_cross, pool_leakage = (np.concatenate(part) for part in zip(*pool))

    if not pool_times.size:
        # Nothing leaves vertex a noticeably; report the least leaky grid time.
        chosen = float(times[np.lexsort((times, leakage))[0]])
        return revival_report(sd, a, b, chosen)
    least = np.lexsort((pool_times, pool_leakage))[0]
    good = pool_leakage < eps
    if good.any():
        order = np.lexsort((pool_times[good], -pool_cross[good]))
        chosen = float(pool_times[good][order[0]])
    else:
        chosen = float(pool_times[least])
    return dataclasses.replace(
        revival_report(sd, a, b, chosen),
        min_leakage_time=float(pool_times[least]),
        min_leakage=float(pool_leakage[least]),
    )


def leakage_curve(
    sd: SpectralDecomposition,
    a: int,
    b: int,
    t_max: float,
    points: int,
) -> list[tuple[float, float, float, float]]:
    _check_pair(sd, a, b)
    if t_max < 0:
        raise InvalidParameter(f't_max must be non-negative, got {t_max}')
    if points < 1:
        raise InvalidParameter(f'points must be >= 1, got {points}')
    times = np.array([0.0]) if t_max == 0 or points == 1 else np.linspace(0.0, t_max, points)
    at_a, cross, leakage = _metrics(pair_block(sd, a, b, times))
    return [
        (float(t), float(x), float(y), float(z))
        for t, x, y, z in zip(times, at_a, cross, leakage)
    ]


def pgst_target(sp: SupportPartition, eps: float) -> PhaseTarget:
    return revival_target(sp, math.pi, eps)


def revival_target(sp: SupportPartition, angle: float, eps: float) -> PhaseTarget:
    if eps <= 0:
        raise InvalidParameter(f'tolerance must be positive, got {eps}')
    angles = {label: 0.0 for label in sp.phi_plus}
    angles.update({label: float(angle) for label in sp.phi_minus})
    return PhaseTarget(angles=angles, tolerance=eps)


def wrap_angle(x):
    return np.mod(np.asarray(x, dtype=float) + math.pi, TWO_PI) - math.pi


def convergent_denominators(x: float, limit: int) -> list[int]:
    """Denominators of the continued fraction convergents of x not exceeding limit."""
    denominators: list[int] = []
    with mpmath.workdps(30):
        value = mpmath.mpf(x)
        q, q_prev = 0, 1
        for _ in range(64):
            a = int(mpmath.floor(value))
            q, q_prev = a * q + q_prev, q
            if q > limit:
                break
            if q > 0:
                denominators.append(q)
            fraction = value - a
            if mpmath.almosteq(fraction, 0, abs_eps=mpmath.mpf(10) ** -15):
                break
            value = 1 / fraction
    return denominators


def _check_lattice(target: PhaseTarget, lattice: RelationLattice) -> None:
    for row in lattice.basis.rows:
        total = 0.0
        for label, coefficient in zip(lattice.support_indices, row):
            if coefficient:
                if label not in target.angles:
                    raise InvalidParameter(f'target has no angle for eigenvalue label {label}')
                total += coefficient * target.angles[label]
        mismatch = float(wrap_angle(total))
        if abs(mismatch) > target.tolerance * sum(abs(c) for c in row):
            relation = {label: c for label, c in zip(lattice.support_indices, row) if c}
            raise InfeasibleTarget(
                f'target violates the relation {relation} by {mismatch:.6f} rad',
                relation=relation,
                mismatch=mismatch,
            )


def _dependent_labels(lattice: RelationLattice) -> set[int]:
    # Rows of a lattice normal form have distinct last nonzero columns, and the
    # eigenvalues left after dropping those columns are independent over Q.
    dependent = set()
    for row in lattice.basis.rows:
        pivot = max(i for i, c in enumerate(row) if c)
        dependent.add(lattice.support_indices[pivot])
    return dependent


def phase_solve(
    eigenvalues: Mapping[int, float],
    target: PhaseTarget,
    budget: int = DEFAULT_PHASE_BUDGET,
    lattice: RelationLattice | None = None,
) -> float | None:
    """A time y with |mu_r * y - zeta_r| < tolerance (mod 2 pi) for every targeted label.

    With a relation lattice the search runs over the rationally independent
    eigenvalues only; every candidate is still checked against all labels.
    """
    if target.tolerance <= 0:
        raise InvalidParameter(f'tolerance must be positive, got {target.tolerance}')
    if budget < 0:
        raise InvalidParameter(f'budget must be non-negative, got {budget}')
    missing = [label for label in target.angles if label not in eigenvalues]
    if missing:
        raise InvalidParameter(f'no eigenvalue for labels {missing}')
    dependent: set[int] = set()
    if lattice is not None:
        _check_lattice(target, lattice)
        dependent = _dependent_labels(lattice)

    eps = target.tolerance
    active = []
    for label in sorted(target.angles):
        mu = float(eigenvalues[label])
        zeta = target.angles[label]
        if abs(mu) <= ZERO_EIGENVALUE_TOL:
            mismatch = float(wrap_angle(zeta))
            if abs(mismatch) >= eps:
                raise InfeasibleTarget(
                    f'eigenvalue label {label} is zero but its target angle is {zeta}',
                    relation={label: 1},
                    mismatch=mismatch,
                )
            continue
        active.append((label, mu, zeta))
    if not active:
        return 0.0
    mus = np.array([mu for _, mu, _ in active])
    zetas = np.array([zeta for _, _, zeta in active])
    free = [i for i, (label, _, _) in enumerate(active) if label not in dependent] or list(range(len(active)))
    free_mus, free_zetas = mus[free], zetas[free]

    def errors(ys: np.ndarray, values: np.ndarray = mus, angles: np.ndarray = zetas) -> np.ndarray:
        return np.max(np.abs(wrap_angle(np.outer(ys, values) - angles)), axis=1)

    def accept(y: float) -> bool:
        return float(errors(np.array([y]))[0]) < eps

    ref = int(np.argmin(np.abs(free_mus)))
    mu_ref, zeta_ref = free_mus[ref], free_zetas[ref]

    def time_of(k) -> np.ndarray:
        return (zeta_ref + TWO_PI * np.asarray(k, dtype=float)) / mu_ref

    ks = sorted({
        q
        for i, mu in enumerate(free_mus)
        if i != ref
        for q in convergent_denominators(float(mu / mu_ref), budget)
    })
    for k in ks:
        y = float(time_of(k))
        if accept(y):
            return y

    for start in range(0, budget, GRID_CHUNK):
        ys = time_of(np.arange(start, min(start + GRID_CHUNK, budget)))
        for hit in np.flatnonzero(errors(ys, free_mus, free_zetas) < eps):
            y = float(ys[hit])
            if accept(y):
                return y

    if budget == 0:
        return None
    span = abs(float(time_of(budget)))
    grid = np.linspace(0.0, span, PHASE_FALLBACK_POINTS)
    spacing = grid[1] - grid[0]
    grid_errors = errors(grid)
    for index in np.argsort(grid_errors, kind='stable')[:PHASE_FALLBACK_SEEDS]:
        low, high = grid[index] - spacing, grid[index] + spacing
        for _ in range(GOLDEN_STEPS):
            left = high - GOLDEN * (high - low)
            right = low + GOLDEN * (high - low)
            if errors(np.array([left]))[0] <= errors(np.array([right]))[0]:
                high = right
            else:
                low = left
        y = (low + high) / 2.0
        if accept(y):
            return float(y)
    return None
