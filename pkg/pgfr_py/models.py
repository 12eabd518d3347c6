from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Any

import numpy as np


DECISION_PROPER = 'pgfr-proper'
DECISION_PGST = 'pgst'
DECISION_NONE = 'no-pgfr'
DECISION_NOT_COSPECTRAL = 'not-strongly-cospectral'
ADMITTING_DECISIONS = (DECISION_PROPER, DECISION_PGST)

SHAPE_BALANCED = 'balanced'
SHAPE_PENDANT_PAIR = 'pendant-pair'

PAIR_CENTERS = 'centers'
PAIR_PENDANTS = 'pendant-pair'
PAIR_EXTREMAL = 'extremal'


def _read_only(array: np.ndarray) -> np.ndarray:
    frozen = np.array(array, copy=True)
    frozen.flags.writeable = False
    return frozen


@dataclass(frozen=True)
class Graph:
    vertex_count: int
    edges: frozenset[tuple[int, int]]

    def degree(self, vertex: int) -> int:
        return sum(1 for edge in self.edges if vertex in edge)


@dataclass(frozen=True)
class LaplacianMatrix:
    order: int
    entries: tuple[tuple[int, ...], ...]

    def to_array(self) -> np.ndarray:
        return np.array(self.entries, dtype=float).reshape(self.order, self.order)


@dataclass(frozen=True)
class IntMatrix:
    rows: tuple[tuple[int, ...], ...]
    cols: int

    @property
    def row_count(self) -> int:
        return len(self.rows)


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    eigenvalues: tuple[float, ...]
    projectors: tuple[np.ndarray, ...]
    # Closed-form index for paths, ascending position otherwise; label 0 is eigenvalue 0.
    labels: tuple[int, ...]
    exact_values: tuple[Any, ...] | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, 'projectors', tuple(_read_only(p) for p in self.projectors))

    @property
    def order(self) -> int:
        return self.projectors[0].shape[0]

    def stacked(self) -> np.ndarray:
        return np.stack(self.projectors)


@dataclass(frozen=True, eq=False)
class WalkSnapshot:
    time: float
    matrix: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, 'matrix', _read_only(self.matrix))


@dataclass(frozen=True)
class SupportPartition:
    pair: tuple[int, int]
    sign_of: Mapping[int, int]

    def __post_init__(self) -> None:
        object.__setattr__(self, 'sign_of', MappingProxyType(dict(self.sign_of)))

    def labels_with(self, sign: int) -> tuple[int, ...]:
        return tuple(sorted(label for label, value in self.sign_of.items() if value == sign))

    @property
    def phi0(self) -> tuple[int, ...]:
        return self.labels_with(0)

    @property
    def phi_plus(self) -> tuple[int, ...]:
        return self.labels_with(1)

    @property
    def phi_minus(self) -> tuple[int, ...]:
        return self.labels_with(-1)


@dataclass(frozen=True)
class RelationLattice:
    support_indices: tuple[int, ...]
    basis: IntMatrix
    exact_values: tuple[Any, ...]
    verified: bool = False

    @property
    def rank(self) -> int:
        return self.basis.row_count


@dataclass(frozen=True)
class PGFRCertificate:
    decision: str
    gcd_value: int
    witness: tuple[int, ...] | None
    partition: SupportPartition | None = None
    lattice: RelationLattice | None = None


@dataclass(frozen=True)
class LimitBlock:
    angle: float
    cross: float
    block: tuple[tuple[complex, complex], tuple[complex, complex]]


@dataclass(frozen=True)
class DoubleStarPair:
    pair: str
    vertices: tuple[int, int]
    phenomenon: str


@dataclass(frozen=True)
class DoubleStarClassification:
    m: int
    n: int
    pairs: tuple[DoubleStarPair, ...]


@dataclass(frozen=True, eq=False)
class RevivalReport:
    time: float
    at_a: float
    cross: float
    leakage: float
    block_phases: np.ndarray
    # Least leaky candidate seen by a search; the report time itself otherwise.
    min_leakage_time: float = 0.0
    min_leakage: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, 'block_phases', _read_only(self.block_phases))


@dataclass(frozen=True)
class PhaseTarget:
    angles: Mapping[int, float]
    tolerance: float

    def __post_init__(self) -> None:
        object.__setattr__(self, 'angles', MappingProxyType(dict(self.angles)))


@dataclass(frozen=True)
class SweepRecord:
    family: str
    parameters: dict[str, Any]
    decision: str
    gcd: int
    witness: tuple[int, ...] | None
    agrees_with_classifier: bool
    notes: tuple[str, ...] = field(default_factory=tuple)
