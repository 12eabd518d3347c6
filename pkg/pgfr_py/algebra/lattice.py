from __future__ import annotations

from collections.abc import Sequence

from ..errors import InvalidParameter
from ..models import IntMatrix


def _echelon(rows: list[list[int]], width: int, *, reduce_above: bool) -> int:
    """Euclidean row echelon on the first `width` columns, in place; returns the rank."""
    rank = 0
    for col in range(width):
        if rank >= len(rows):
            break
        while True:
            live = [i for i in range(rank, len(rows)) if rows[i][col]]
            if not live:
                break
            best = min(live, key=lambda i: (abs(rows[i][col]), i))
            rows[rank], rows[best] = rows[best], rows[rank]
            pivot = rows[rank]
            cleared = True
            for i in range(rank + 1, len(rows)):
                value = rows[i][col]
                if value:
                    q = value // pivot[col]
                    rows[i] = [x - q * y for x, y in zip(rows[i], pivot)]
                    if rows[i][col]:
                        cleared = False
            if cleared:
                break
        if not rows[rank][col]:
            continue
        if rows[rank][col] < 0:
            rows[rank] = [-x for x in rows[rank]]
        if reduce_above:
            pivot = rows[rank]
            for i in range(rank):
                q = rows[i][col] // pivot[col]
                if q:
                    rows[i] = [x - q * y for x, y in zip(rows[i], pivot)]
        rank += 1
    return rank


def _check_rows(rows: Sequence[Sequence[int]], cols: int) -> list[list[int]]:
    checked = []
    for row in rows:
        if len(row) != cols:
            raise InvalidParameter(f'row {tuple(row)} does not have {cols} columns')
        checked.append([int(x) for x in row])
    return checked


def hermite_normal_form(rows: Sequence[Sequence[int]], cols: int) -> list[list[int]]:
    """Row-style HNF: leftmost pivots, positive, entries above each pivot reduced into [0, pivot)."""
    work = _check_rows(rows, cols)
    rank = _echelon(work, cols, reduce_above=True)
    return work[:rank]


def lattice_normal_form(rows: Sequence[Sequence[int]], cols: int) -> IntMatrix:
    """Canonical basis: HNF taken on reversed columns, rows ordered by last nonzero entry."""
    reversed_rows = [list(reversed(row)) for row in _check_rows(rows, cols)]
    normal = hermite_normal_form(reversed_rows, cols)
    return IntMatrix(rows=tuple(tuple(reversed(row)) for row in reversed(normal)), cols=cols)


def integer_kernel(matrix: IntMatrix) -> IntMatrix:
    """Basis of {x in Z^k : x * M = 0} for a k x c matrix M, in lattice normal form."""
    k = matrix.row_count
    width = matrix.cols
    augmented = [
        list(row) + [1 if j == i else 0 for j in range(k)]
        for i, row in enumerate(_check_rows(matrix.rows, width))
    ]
    rank = _echelon(augmented, width, reduce_above=False)
    kernel = [row[width:] for row in augmented[rank:]]
    return lattice_normal_form(kernel, k)


def in_lattice(basis: IntMatrix, vector: Sequence[int]) -> bool:
    return lattice_coordinates(basis, vector) is not None


def lattice_coordinates(basis: IntMatrix, vector: Sequence[int]) -> tuple[int, ...] | None:
    if len(vector) != basis.cols:
        raise InvalidParameter(f'vector of length {len(vector)} against lattice in Z^{basis.cols}')
    # Rows of a lattice normal form have distinct last-nonzero columns.
    remaining = [int(x) for x in vector]
    coordinates = [0] * basis.row_count
    for index in range(basis.row_count - 1, -1, -1):
        row = basis.rows[index]
        pivot_col = max(i for i, x in enumerate(row) if x)
        value = remaining[pivot_col]
        if value % row[pivot_col]:
            return None
        q = value // row[pivot_col]
        coordinates[index] = q
        if q:
            remaining = [x - q * y for x, y in zip(remaining, row)]
    return tuple(coordinates) if not any(remaining) else None
