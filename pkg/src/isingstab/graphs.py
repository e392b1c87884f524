"""Finite simple graphs and the generators used throughout the package.

Vertices are dense integers ``0..n-1``.  Edges are stored canonically as
``(min, max)`` pairs sorted lexicographically, so the position of an edge in
``Graph.edges`` is stable and can index per-edge couplings.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations, product

import numpy as np


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple[tuple[int, int], ...]
    family: str | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"graph needs at least one vertex, got n={self.n}")
        canon = []
        for u, v in self.edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u}, {v}) has endpoint outside [0, {self.n})")
            canon.append((min(u, v), max(u, v)))
        canon.sort()
        for a, b in zip(canon, canon[1:]):
            if a == b:
                raise ValueError(f"duplicate edge {a}")
        object.__setattr__(self, "edges", tuple(canon))

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def k_g(self) -> int:
        """Total parameter count |E| + |V|."""
        return self.n_edges + self.n

    @cached_property
    def edge_array(self) -> np.ndarray:
        """``(|E|, 2)`` int array of canonical edges."""
        return np.array(self.edges, dtype=np.int64).reshape(-1, 2)

    @cached_property
    def edge_index(self) -> dict[tuple[int, int], int]:
        return {e: i for i, e in enumerate(self.edges)}

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        nbrs: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            nbrs[u].append(v)
            nbrs[v].append(u)
        return tuple(tuple(sorted(x)) for x in nbrs)

    @cached_property
    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.n, dtype=np.int64)
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    @property
    def max_degree(self) -> int:
        return int(self.degrees.max())

    @property
    def is_complete(self) -> bool:
        return self.n_edges == self.n * (self.n - 1) // 2

    def csr(self, weights=None) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Symmetric CSR arrays ``(indptr, neighbors, edge_weights)``.

        ``weights`` is one value per canonical edge; defaults to all ones.
        """
        w = np.ones(self.n_edges) if weights is None else np.asarray(weights, dtype=np.float64)
        if w.shape != (self.n_edges,):
            raise ValueError(f"expected {self.n_edges} edge weights, got shape {w.shape}")
        e = self.edge_array
        src = np.concatenate([e[:, 0], e[:, 1]])
        dst = np.concatenate([e[:, 1], e[:, 0]])
        ww = np.concatenate([w, w])
        order = np.lexsort((dst, src))
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=self.n), out=indptr[1:])
        return indptr, dst[order].astype(np.int64), ww[order]

    def edges_from_adjacency(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted({(min(x, y), max(x, y)) for x, ys in enumerate(self.adjacency) for y in ys}))

    def to_json(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_json(cls, data: dict) -> "Graph":
        return cls(int(data["n"]), tuple(tuple(e) for e in data["edges"]), family=data.get("family"))


def max_degree(g: Graph) -> int:
    return g.max_degree


def build_complete(n: int) -> Graph:
    if n < 1:
        raise ValueError("complete graph needs n >= 1")
    return Graph(n, tuple(combinations(range(n), 2)), family="complete")


def build_kings(n: int, m: int) -> Graph:
    """``n`` x ``m`` King's graph; vertex ``(i, j)`` has index ``i*m + j``."""
    if n < 1 or m < 1:
        raise ValueError("King's graph needs positive dimensions")
    edges = []
    for i, j in product(range(n), range(m)):
        for di, dj in ((0, 1), (1, -1), (1, 0), (1, 1)):
            a, b = i + di, j + dj
            if 0 <= a < n and 0 <= b < m:
                edges.append((i * m + j, a * m + b))
    return Graph(n * m, tuple(edges), family="kings")


def build_star(k: int) -> Graph:
    """Star with center 0 and leaves ``1..k``."""
    if k < 1:
        raise ValueError("star graph needs k >= 1 leaves")
    return Graph(k + 1, tuple((0, i) for i in range(1, k + 1)), family="star")


def build_torus(side_lengths) -> Graph:
    """Periodic hypercubic lattice, row-major vertex order.

    Every side must be at least 3 so that wrap-around never produces a
    repeated edge or self-loop.
    """
    sides = [int(s) for s in side_lengths]
    if not sides:
        raise ValueError("torus needs at least one dimension")
    if any(s < 3 for s in sides):
        raise ValueError(f"torus side lengths must be >= 3, got {sides}")
    shape = tuple(sides)
    n = int(np.prod(shape))
    idx = np.arange(n).reshape(shape)
    edges = []
    for axis in range(len(shape)):
        shifted = np.roll(idx, -1, axis=axis)
        edges.extend(zip(idx.ravel().tolist(), shifted.ravel().tolist()))
    return Graph(n, tuple(edges), family=f"torus{len(shape)}d")


def torus_cycle_edges(g: Graph) -> np.ndarray:
    """Indices of bonds ``{x, x+1 mod n}`` in cycle order for a 1-D torus.

    Raises ``ValueError`` unless ``g`` is exactly the cycle ``0-1-...-(n-1)-0``.
    """
    if g.n < 3 or g.n_edges != g.n:
        raise ValueError("graph is not a one-dimensional torus")
    try:
        return np.array([g.edge_index[(min(x, (x + 1) % g.n), max(x, (x + 1) % g.n))] for x in range(g.n)])
    except KeyError:
        raise ValueError("graph is not a one-dimensional torus") from None
