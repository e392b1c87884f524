"""Ground states and energy extremes.

Three routes: exhaustive enumeration (exact, small instances), a linear-time
closed form for the zero-field 1-D torus, and a parallel-update annealer for
everything else.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numba
import numpy as np

from .graphs import torus_cycle_edges
from .hamiltonian import IsingInstance, energy, extreme_configs


@dataclass(frozen=True)
class GroundStateResult:
    config: np.ndarray
    energy: float
    exact: bool

    def to_json(self) -> dict:
        return {"config": self.config.astype(int).tolist(), "energy": self.energy, "exact": self.exact}


def ground_state_exact(instance: IsingInstance, cap: int | None = None) -> GroundStateResult:
    lo, _ = extreme_configs(instance, cap)
    return GroundStateResult(lo, energy(instance, lo), True)


def _cycle_optimum(J: np.ndarray) -> np.ndarray:
    """Spins on a cycle minimising ``-sum J_x s_x s_{x+1}``.

    Every bond is satisfied while walking from the vertex after the weakest
    bond; only the weakest bond can end up frustrated.
    """
    n = J.size
    weakest = int(np.argmin(np.abs(J)))
    s = np.empty(n, dtype=np.int8)
    start = (weakest + 1) % n
    s[start] = 1
    x = start
    for _ in range(n - 1):
        nxt = (x + 1) % n
        s[nxt] = s[x] if J[x] >= 0 else -s[x]
        x = nxt
    return s


def extremes_1d_torus_configs(instance: IsingInstance) -> tuple[np.ndarray, np.ndarray]:
    if instance.has_fields:
        raise ValueError("closed-form 1-D solver requires zero external fields")
    order = torus_cycle_edges(instance.graph)
    J = instance.couplings[order]
    return _cycle_optimum(J), _cycle_optimum(-J)


def extremes_1d_torus(instance: IsingInstance) -> tuple[float, float]:
    """Exact ``(min_energy, max_energy)`` of a zero-field 1-D torus in O(N).

    The minimum is ``-sum|J|`` when the bond signs admit an unfrustrated
    assignment around the cycle, and ``-sum|J| + 2 min|J|`` otherwise; the
    maximum follows by negating all couplings.
    """
    lo, hi = extremes_1d_torus_configs(instance)
    return energy(instance, lo), energy(instance, hi)


@dataclass(frozen=True)
class AnnealerParams:
    """Schedule for :func:`anneal_extremes`.

    Temperatures and pinning strengths are in units of the instance's rms
    local field, so the defaults suit any overall coupling scale.
    """

    sweeps: int = 1000
    t_initial: float = 2.0
    t_final: float = 0.02
    pin_initial: float = 0.2
    pin_final: float = 1.0
    restarts: int = 4
    seed: int = 0
    polish: bool = True

    def __post_init__(self):
        if self.sweeps < 0 or self.restarts < 1:
            raise ValueError("sweeps must be >= 0 and restarts >= 1")
        if not (self.t_initial > 0 and self.t_final > 0):
            raise ValueError("temperatures must be positive")
        if self.t_final > self.t_initial:
            raise ValueError("final temperature must not exceed the initial temperature")
        if self.pin_initial < 0 or self.pin_final < 0:
            raise ValueError("pinning strengths must be nonnegative")

    def to_json(self) -> dict:
        return asdict(self)


def _geometric(a: float, b: float, k: int) -> np.ndarray:
    if k <= 1:
        return np.array([a] * k, dtype=np.float64)
    if a == 0 or b == 0:
        return np.linspace(a, b, k)
    return a * (b / a) ** (np.arange(k) / (k - 1))


@numba.njit(cache=True)
def _local_fields(indptr, nbr, w, h, s, out):
    for x in range(s.size):
        f = h[x]
        for k in range(indptr[x], indptr[x + 1]):
            f += w[k] * s[nbr[k]]
        out[x] = f


@numba.njit(cache=True)
def _energy_from_fields(h, s, f):
    # H = -1/2 sum_x s_x (f_x - h_x) - sum_x h_x s_x
    e = 0.0
    for x in range(s.size):
        e -= 0.5 * s[x] * (f[x] + h[x])
    return e


@numba.njit(cache=True)
def _sca_block(indptr, nbr, w, h, s, best, best_e, temps, pins, u):
    """Synchronous heat-bath sweeps; returns the best energy seen.

    Each spin independently draws its new value from the heat-bath law of
    its local field plus a self-coupling ``pin * s_x`` that favours keeping
    its current value, then all spins update at once.
    """
    n = s.size
    f = np.empty(n)
    new = np.empty(n)
    for t in range(temps.size):
        _local_fields(indptr, nbr, w, h, s, f)
        beta = 1.0 / temps[t]
        for x in range(n):
            a = 2.0 * beta * (f[x] + pins[t] * s[x])
            if a > 0:
                p_up = 1.0 / (1.0 + np.exp(-a))
            else:
                ea = np.exp(a)
                p_up = ea / (1.0 + ea)
            new[x] = 1.0 if u[t, x] < p_up else -1.0
        for x in range(n):
            s[x] = new[x]
        _local_fields(indptr, nbr, w, h, s, f)
        e = _energy_from_fields(h, s, f)
        if e < best_e:
            best_e = e
            for x in range(n):
                best[x] = s[x]
    return best_e


@numba.njit(cache=True)
def _greedy_descent(indptr, nbr, w, h, s):
    """Sequential single-flip descent to a local minimum."""
    n = s.size
    f = np.empty(n)
    _local_fields(indptr, nbr, w, h, s, f)
    improved = True
    while improved:
        improved = False
        for x in range(n):
            if s[x] * f[x] < 0:
                s[x] = -s[x]
                for k in range(indptr[x], indptr[x + 1]):
                    f[nbr[k]] += 2.0 * w[k] * s[x]
                improved = True


@numba.njit(cache=True)
def _domain_flip(indptr, nbr, w, h, s, tol):
    """Flip the best domain of the satisfied-bond subgraph if that lowers H.

    Domains are connected components under bonds with ``J s_x s_y > 0``, so
    every bond leaving a domain is unsatisfied (or zero) and flipping the
    whole domain changes only those bonds and the domain's field terms.
    Returns True when a flip was made.
    """
    n = s.size
    comp = -np.ones(n, dtype=np.int64)
    stack = np.empty(n, dtype=np.int64)
    n_comp = 0
    for root in range(n):
        if comp[root] >= 0:
            continue
        comp[root] = n_comp
        top = 1
        stack[0] = root
        while top > 0:
            top -= 1
            x = stack[top]
            for k in range(indptr[x], indptr[x + 1]):
                y = nbr[k]
                if comp[y] < 0 and w[k] * s[x] * s[y] > 0:
                    comp[y] = n_comp
                    stack[top] = y
                    top += 1
        n_comp += 1
    delta = np.zeros(n_comp)
    for x in range(n):
        delta[comp[x]] += 2.0 * h[x] * s[x]
        for k in range(indptr[x], indptr[x + 1]):
            y = nbr[k]
            if comp[y] != comp[x]:
                delta[comp[x]] += 2.0 * w[k] * s[x] * s[y]
    best = 0
    for c in range(1, n_comp):
        if delta[c] < delta[best]:
            best = c
    if delta[best] >= -tol:
        return False
    for x in range(n):
        if comp[x] == best:
            s[x] = -s[x]
    return True


@numba.njit(cache=True)
def _polish(indptr, nbr, w, h, s, tol):
    _greedy_descent(indptr, nbr, w, h, s)
    while _domain_flip(indptr, nbr, w, h, s, tol):
        _greedy_descent(indptr, nbr, w, h, s)


def _rms_local_field(instance: IsingInstance) -> float:
    deg = instance.graph.degrees
    J2 = np.zeros(instance.n)
    e = instance.graph.edge_array
    if e.size:
        np.add.at(J2, e[:, 0], instance.couplings**2)
        np.add.at(J2, e[:, 1], instance.couplings**2)
    scale = float(np.sqrt(np.mean(J2 + instance.fields**2)))
    return scale if scale > 0 and deg.size else 1.0


def _anneal_min(instance: IsingInstance, params: AnnealerParams, rng: np.random.Generator, s0: np.ndarray):
    indptr, nbr, w = instance.csr
    h = np.ascontiguousarray(instance.fields)
    scale = _rms_local_field(instance)
    temps = _geometric(params.t_initial, params.t_final, params.sweeps) * scale
    pins = _geometric(params.pin_initial, params.pin_final, params.sweeps) * scale
    s = s0.astype(np.float64).copy()
    best = s.copy()
    best_e = energy(instance, best)
    block = max(1, min(params.sweeps, 2_000_000 // max(instance.n, 1)))
    for start in range(0, params.sweeps, block):
        stop = min(start + block, params.sweeps)
        u = rng.random((stop - start, instance.n))
        best_e = _sca_block(indptr, nbr, w, h, s, best, best_e, temps[start:stop], pins[start:stop], u)
    if params.polish and params.sweeps > 0:
        _polish(indptr, nbr, w, h, best, 1e-12 * scale)
    cfg = best.astype(np.int8)
    return energy(instance, cfg), cfg


def anneal_extremes(instance: IsingInstance, params: AnnealerParams | None = None):
    """Heuristic ``(min_est, max_est, best_config)``.

    Both estimates are energies of configurations actually visited, so
    ``min_est >= min H`` and ``max_est <= max H``.  The maximum is found by
    minimising the negated instance.  Output depends only on ``params``.
    """
    params = params or AnnealerParams()
    neg = instance.negated()
    best_lo, best_hi, best_cfg = np.inf, -np.inf, None
    for r in range(params.restarts):
        rng = np.random.default_rng([params.seed, r])
        s0 = np.where(rng.random(instance.n) < 0.5, -1, 1).astype(np.int8)
        e_lo, cfg_lo = _anneal_min(instance, params, rng, s0)
        e_neg, _ = _anneal_min(neg, params, rng, s0)
        if e_lo < best_lo:
            best_lo, best_cfg = e_lo, cfg_lo
        best_hi = max(best_hi, -e_neg)
    return best_lo, best_hi, best_cfg


def ground_state_anneal(instance: IsingInstance, params: AnnealerParams | None = None) -> GroundStateResult:
    e, _, cfg = anneal_extremes(instance, params)
    return GroundStateResult(cfg, e, False)
