"""Ising instances, energies and exhaustive-enumeration oracles.

Configurations are encoded as integers for enumeration: bit ``n-1-x`` is set
iff ``sigma_x = +1``.  Under this encoding integer order is lexicographic
order on ``(sigma_0, sigma_1, ...)`` with ``-1 < +1``, which is the tie-break
used everywhere a minimiser or maximiser is reported.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numba
import numpy as np

from .graphs import Graph

BRUTE_FORCE_CAP = 24


class OracleSizeError(ValueError):
    """Instance too large for exhaustive enumeration."""


@dataclass(frozen=True, eq=False)
class IsingInstance:
    graph: Graph
    couplings: np.ndarray
    fields: np.ndarray

    def __post_init__(self):
        J = np.array(self.couplings, dtype=np.float64).reshape(-1)
        h = np.zeros(self.graph.n) if self.fields is None else np.array(self.fields, dtype=np.float64).reshape(-1)
        if J.shape != (self.graph.n_edges,):
            raise ValueError(f"expected {self.graph.n_edges} couplings, got {J.size}")
        if h.shape != (self.graph.n,):
            raise ValueError(f"expected {self.graph.n} fields, got {h.size}")
        if not (np.all(np.isfinite(J)) and np.all(np.isfinite(h))):
            raise ValueError("couplings and fields must be finite")
        J.flags.writeable = False
        h.flags.writeable = False
        object.__setattr__(self, "couplings", J)
        object.__setattr__(self, "fields", h)

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def has_fields(self) -> bool:
        return bool(np.any(self.fields != 0.0))

    @cached_property
    def csr(self):
        return self.graph.csr(self.couplings)

    def negated(self) -> "IsingInstance":
        return IsingInstance(self.graph, -self.couplings, -self.fields)

    def with_params(self, couplings, fields) -> "IsingInstance":
        return IsingInstance(self.graph, couplings, fields)

    def to_json(self) -> dict:
        return {
            "graph": self.graph.to_json(),
            "J": self.couplings.tolist(),
            "h": self.fields.tolist(),
        }

    @classmethod
    def from_json(cls, data: dict) -> "IsingInstance":
        gd = data["graph"]
        raw_edges = [tuple(int(v) for v in e) for e in gd["edges"]]
        J = np.asarray(data["J"], dtype=np.float64)
        if J.size != len(raw_edges):
            raise ValueError(f"J has {J.size} entries but graph has {len(raw_edges)} edges")
        g = Graph(int(gd["n"]), tuple(raw_edges))
        # couplings follow the edge order given in the file; re-key them canonically
        J_canon = np.empty_like(J)
        for (u, v), val in zip(raw_edges, J):
            J_canon[g.edge_index[(min(u, v), max(u, v))]] = val
        h = data.get("h")
        return cls(g, J_canon, np.zeros(g.n) if h is None else h)


def as_spins(config, n: int | None = None) -> np.ndarray:
    s = np.asarray(config)
    if s.ndim != 1:
        raise ValueError("spin configuration must be one-dimensional")
    if n is not None and s.size != n:
        raise ValueError(f"configuration has length {s.size}, instance has {n} vertices")
    if not np.all((s == 1) | (s == -1)):
        raise ValueError("spins must be exactly -1 or +1")
    return s.astype(np.int8)


def energy(instance: IsingInstance, config) -> float:
    s = as_spins(config, instance.n).astype(np.float64)
    e = instance.graph.edge_array
    if e.size:
        bonds = float(np.dot(instance.couplings, s[e[:, 0]] * s[e[:, 1]]))
    else:
        bonds = 0.0
    return -bonds - float(np.dot(instance.fields, s))


def v_h(instance: IsingInstance) -> float:
    """Sum of squared couplings and fields."""
    return float(np.dot(instance.couplings, instance.couplings) + np.dot(instance.fields, instance.fields))


@dataclass(frozen=True)
class OverlapSets:
    disagreement_vertices: frozenset
    disagreement_edges: frozenset


def overlaps(sigma, tau, g: Graph) -> OverlapSets:
    s = as_spins(sigma, g.n)
    t = as_spins(tau, g.n)
    spin = s * t
    D = frozenset(np.flatnonzero(spin == -1).tolist())
    e = g.edge_array
    if e.size:
        link = spin[e[:, 0]] * spin[e[:, 1]]
        W = frozenset(g.edges[i] for i in np.flatnonzero(link == -1))
    else:
        W = frozenset()
    return OverlapSets(D, W)


def code_to_spins(code: int, n: int) -> np.ndarray:
    bits = (int(code) >> np.arange(n - 1, -1, -1)) & 1
    return (2 * bits - 1).astype(np.int8)


def spins_to_code(config) -> int:
    s = np.asarray(config)
    code = 0
    for v in s:
        code = (code << 1) | (1 if v > 0 else 0)
    return code


def _check_cap(n: int, cap: int | None):
    cap = BRUTE_FORCE_CAP if cap is None else cap
    if n > cap:
        raise OracleSizeError(f"{n} vertices exceeds the brute-force cap of {cap}")


@numba.njit(cache=True)
def _direct_energy(indptr, nbr, w, h, s):
    e = 0.0
    n = s.size
    for x in range(n):
        acc = 0.0
        for k in range(indptr[x], indptr[x + 1]):
            y = nbr[k]
            if y > x:
                acc += w[k] * s[y]
        e -= s[x] * (acc + h[x])
    return e


@numba.njit(cache=True)
def _gray_extremes(indptr, nbr, w, h, tol):
    """Enumerate all 2^n states by Gray code with O(deg) updates.

    Candidates within ``tol`` of the incumbent are re-evaluated directly so
    that the winner and its tie-break do not depend on accumulated round-off.
    Returns ``(min_code, max_code)`` in lexicographic encoding.
    """
    n = h.size
    s = -np.ones(n, dtype=np.float64)
    e = _direct_energy(indptr, nbr, w, h, s)
    lex = 0
    best_lo, best_hi = e, e
    code_lo, code_hi = 0, 0
    exact_lo, exact_hi = e, e
    buf = np.empty(n, dtype=np.float64)
    total = 1 << n
    for k in range(1, total):
        # bit flipped by the reflected Gray code at step k
        x = 0
        kk = k
        while (kk & 1) == 0:
            kk >>= 1
            x += 1
        f = h[x]
        for j in range(indptr[x], indptr[x + 1]):
            f += w[j] * s[nbr[j]]
        e += 2.0 * s[x] * f
        s[x] = -s[x]
        lex ^= 1 << (n - 1 - x)
        if e < best_lo - tol:
            best_lo = e
            code_lo = lex
            exact_lo = _direct_energy(indptr, nbr, w, h, s)
        elif e <= best_lo + tol:
            ex = _direct_energy(indptr, nbr, w, h, s)
            if ex < exact_lo or (ex == exact_lo and lex < code_lo):
                exact_lo = ex
                code_lo = lex
                best_lo = min(best_lo, e)
        if e > best_hi + tol:
            best_hi = e
            code_hi = lex
            exact_hi = _direct_energy(indptr, nbr, w, h, s)
        elif e >= best_hi - tol:
            ex = _direct_energy(indptr, nbr, w, h, s)
            if ex > exact_hi or (ex == exact_hi and lex < code_hi):
                exact_hi = ex
                code_hi = lex
                best_hi = max(best_hi, e)
    return code_lo, code_hi


@numba.njit(cache=True)
def _all_energies(indptr, nbr, w, h):
    n = h.size
    total = 1 << n
    out = np.empty(total, dtype=np.float64)
    s = np.empty(n, dtype=np.float64)
    for code in range(total):
        for x in range(n):
            s[x] = 1.0 if (code >> (n - 1 - x)) & 1 else -1.0
        out[code] = _direct_energy(indptr, nbr, w, h, s)
    return out


def _enumeration_tol(instance: IsingInstance) -> float:
    scale = float(np.abs(instance.couplings).sum() + np.abs(instance.fields).sum())
    return 1e-9 * max(scale, 1.0)


def extreme_configs(instance: IsingInstance, cap: int | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Exact ``(argmin, argmax)`` configurations, lexicographically smallest on ties."""
    _check_cap(instance.n, cap)
    indptr, nbr, w = instance.csr
    lo, hi = _gray_extremes(indptr, nbr, w, instance.fields, _enumeration_tol(instance))
    return code_to_spins(lo, instance.n), code_to_spins(hi, instance.n)


def range_exact(instance: IsingInstance, cap: int | None = None) -> tuple[float, float, float]:
    """Exact ``(min_energy, max_energy, r_h)`` by exhaustive enumeration."""
    lo, hi = extreme_configs(instance, cap)
    e_min = energy(instance, lo)
    e_max = energy(instance, hi)
    return e_min, e_max, e_max - e_min


def all_energies(instance: IsingInstance, cap: int | None = None) -> np.ndarray:
    """Energies of all ``2**n`` configurations indexed by lexicographic code."""
    _check_cap(instance.n, cap)
    indptr, nbr, w = instance.csr
    return _all_energies(indptr, nbr, w, instance.fields)
