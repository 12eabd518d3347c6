from __future__ import annotations

import json
from collections.abc import Iterable

import numpy as np

from .errors import InvalidParameter
from .models import Graph, LaplacianMatrix


def make_graph(vertex_count: int, edges: Iterable[tuple[int, int]]) -> Graph:
    if vertex_count < 1:
        raise InvalidParameter(f'a graph needs at least one vertex, got {vertex_count}')
    canonical: set[tuple[int, int]] = set()
    for u, v in edges:
        if not (1 <= u <= vertex_count and 1 <= v <= vertex_count):
            raise InvalidParameter(f'edge {{{u}, {v}}} leaves vertex range 1..{vertex_count}')
        if u == v:
            raise InvalidParameter(f'self-loop at vertex {u}')
        edge = (min(u, v), max(u, v))
        if edge in canonical:
            raise InvalidParameter(f'duplicate edge {{{edge[0]}, {edge[1]}}}')
        canonical.add(edge)
    return Graph(vertex_count=vertex_count, edges=frozenset(canonical))


def make_path(n: int) -> Graph:
    if n < 1:
        raise InvalidParameter(f'path order must be >= 1, got {n}')
    return make_graph(n, ((i, i + 1) for i in range(1, n)))


def make_double_star(m: int, n: int) -> Graph:
    """S(m, n): vertices 1..n hang off center n+1, vertices n+3..n+m+2 hang off center n+2."""
    if m < 1 or n < 1:
        raise InvalidParameter(f'double star needs m, n >= 1, got m={m}, n={n}')
    second, first = n + 1, n + 2
    edges = [(i, second) for i in range(1, n + 1)]
    edges.append((second, first))
    edges.extend((first, j) for j in range(n + 3, n + m + 3))
    return make_graph(n + m + 2, edges)


def double_star_centers(m: int, n: int) -> tuple[int, int]:
    if m < 1 or n < 1:
        raise InvalidParameter(f'double star needs m, n >= 1, got m={m}, n={n}')
    return n + 1, n + 2


def double_star_pendant_pair(m: int, n: int) -> tuple[int, int]:
    if m < 1 or n < 1:
        raise InvalidParameter(f'double star needs m, n >= 1, got m={m}, n={n}')
    if n == 2:
        return 1, 2
    if m == 2:
        return n + 3, n + 4
    if n >= 2:
        return 1, 2
    if m >= 2:
        return n + 3, n + 4
    raise InvalidParameter('S(1, 1) has no two pendants on a common center')


def is_connected(graph: Graph) -> bool:
    neighbours: dict[int, list[int]] = {v: [] for v in range(1, graph.vertex_count + 1)}
    for u, v in graph.edges:
        neighbours[u].append(v)
        neighbours[v].append(u)
    seen = {1}
    stack = [1]
    while stack:
        for w in neighbours[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == graph.vertex_count


def laplacian(graph: Graph) -> LaplacianMatrix:
    order = graph.vertex_count
    rows = [[0] * order for _ in range(order)]
    for u, v in graph.edges:
        rows[u - 1][v - 1] -= 1
        rows[v - 1][u - 1] -= 1
        rows[u - 1][u - 1] += 1
        rows[v - 1][v - 1] += 1
    return LaplacianMatrix(order=order, entries=tuple(tuple(row) for row in rows))


def graph_to_json(graph: Graph) -> str:
    payload = {
        'n': graph.vertex_count,
        'edges': [list(edge) for edge in sorted(graph.edges)],
    }
    return json.dumps(payload, ensure_ascii=False, indent=2)


def graph_from_json(text: str) -> Graph:
    try:
        payload = json.loads(text)
        vertex_count = int(payload['n'])
        edges = [(int(u), int(v)) for u, v in payload['edges']]
    except (ValueError, KeyError, TypeError) as exc:
        raise InvalidParameter(f'malformed graph JSON: {exc}') from exc
    return make_graph(vertex_count, edges)


def random_connected_graph(order: int, edge_probability: float = 0.3, seed: int = 0) -> Graph:
    """Random spanning tree plus independent extra edges, reproducible from the seed."""
    if order < 1:
        raise InvalidParameter(f'graph order must be >= 1, got {order}')
    if not 0.0 <= edge_probability <= 1.0:
        raise InvalidParameter(f'edge probability must lie in [0, 1], got {edge_probability}')
    rng = np.random.default_rng(seed)
    vertices = [int(v) + 1 for v in rng.permutation(order)]
    edges = set()
    for index in range(1, order):
        parent = vertices[int(rng.integers(0, index))]
        child = vertices[index]
        edges.add((min(parent, child), max(parent, child)))
    for u in range(1, order + 1):
        for v in range(u + 1, order + 1):
            if (u, v) not in edges and rng.random() < edge_probability:
                edges.add((u, v))
    return make_graph(order, sorted(edges))
