"""Dropping weakly coupled vertices and the 1-D torus compression guarantee."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .hamiltonian import IsingInstance, all_energies
from .special import gaussian_central_mass

FOLDED_NORMAL_MEAN = math.sqrt(2.0 / math.pi)
FOLDED_NORMAL_VAR = 1.0 - 2.0 / math.pi

# (N, epsilon, delta, alpha) with C = 1
TABLE1_ROWS = (
    (10**8, 0.05, 0.0198, 0.4),
    (10**8, 0.05, 0.0198, 0.5),
    (10**8, 0.1, 0.0398, 0.5),
    (10**12, 0.01, 0.00398, 0.5),
    (10**12, 0.05, 0.0199, 0.5),
    (10**12, 0.1, 0.0399, 0.5),
    (10**12, 0.05, 0.0199, 0.6),
    (10**12, 0.05, 0.0199, 0.65),
)


@dataclass(frozen=True)
class CompressionResult:
    kept: tuple[int, ...]
    removed: tuple[int, ...]
    delta: float
    deviation_bound: float
    removed_degree_sum: int

    def to_json(self) -> dict:
        return {
            "kept": list(self.kept),
            "removed": list(self.removed),
            "delta": self.delta,
            "deviation_bound": self.deviation_bound,
            "removed_degree_sum": self.removed_degree_sum,
        }


def removed_mask(instance: IsingInstance, delta: float) -> np.ndarray:
    """True for vertices whose every incident coupling has ``|J| < delta``."""
    strong = np.abs(instance.couplings) >= delta
    mask = np.ones(instance.n, dtype=bool)
    e = instance.graph.edge_array
    if e.size:
        mask[e[strong, 0]] = False
        mask[e[strong, 1]] = False
    return mask


def build_v0(instance: IsingInstance, delta: float) -> CompressionResult:
    if not delta > 0:
        raise ValueError("delta must be positive")
    if instance.has_fields:
        raise ValueError("compression is defined for zero external fields only")
    mask = removed_mask(instance, delta)
    removed = tuple(np.flatnonzero(mask).tolist())
    kept = tuple(np.flatnonzero(~mask).tolist())
    deg_sum = int(instance.graph.degrees[mask].sum())
    return CompressionResult(kept, removed, float(delta), 2.0 * delta * deg_sum, deg_sum)


def deviation_exact(instance: IsingInstance, result: CompressionResult, cap: int | None = None) -> float:
    """``sup |H(sigma) - H(sigma on kept, tau on removed)|`` over all sigma, tau.

    For a fixed assignment on the kept set the supremum over the removed spins
    is the spread (max - min) of H over removed-set assignments, so one pass
    over all ``2**n`` energies suffices.
    """
    if not result.removed:
        return 0.0
    E = all_energies(instance, cap)
    n = instance.n
    codes = np.arange(E.size, dtype=np.int64)
    # lexicographic code puts vertex x at bit n-1-x
    kept_key = np.zeros(E.size, dtype=np.int64)
    for j, x in enumerate(result.kept):
        kept_key |= ((codes >> (n - 1 - x)) & 1) << j
    n_groups = 1 << len(result.kept)
    hi = np.full(n_groups, -np.inf)
    lo = np.full(n_groups, np.inf)
    np.maximum.at(hi, kept_key, E)
    np.minimum.at(lo, kept_key, E)
    return float(np.max(hi - lo))


def removed_size_moments(n: int, theta: float) -> tuple[float, float]:
    """Closed-form ``(E|V\\V0|, E|V\\V0|**2)`` on the 1-D torus."""
    if n < 3:
        raise ValueError("moments formula needs n >= 3")
    if not 0 <= theta <= 1:
        raise ValueError("theta must lie in [0, 1]")
    t2 = theta * theta
    return n * t2, n * t2 * (1.0 + 2.0 * theta - 3.0 * t2 + n * t2)


@dataclass(frozen=True)
class TorusGuaranteeQuery:
    n: int
    epsilon: float
    delta: float
    c: float = 1.0
    alpha: float = 0.5
    check_hypothesis: bool = True

    def __post_init__(self):
        if self.n < 3:
            raise ValueError("n must be >= 3")
        if not (self.epsilon > 0 and self.delta > 0):
            raise ValueError("epsilon and delta must be positive")
        if self.check_hypothesis and not self.hypothesis_holds:
            raise ValueError("requires delta < epsilon / sqrt(2 pi)")
        if not self.c > 0:
            raise ValueError("c must be positive")
        if not 0 <= self.alpha < 1:
            raise ValueError("alpha must lie in [0, 1)")

    @property
    def hypothesis_holds(self) -> bool:
        return self.delta < self.epsilon / math.sqrt(2.0 * math.pi)

    @property
    def theta(self) -> float:
        return gaussian_central_mass(self.delta)


def chebyshev_deficit(n: int, epsilon: float, delta: float) -> float:
    """Chebyshev bound on the sample mean of ``|J|`` straying from its mean."""
    gap = FOLDED_NORMAL_MEAN - 2.0 * delta / epsilon
    return FOLDED_NORMAL_VAR / (n * gap * gap)


def torus_guarantee(q: TorusGuaranteeQuery) -> tuple[float, float]:
    """Lower bounds ``(bound_general, bound_with_size)`` for the compression event.

    ``bound_general`` takes P(A) = 1.  ``bound_with_size`` uses the
    second-moment estimate for ``P(|V\\V0| >= C N**alpha)``, which is taken
    as 0 whenever ``C N**alpha`` exceeds the mean ``N theta**2``.
    """
    theta = q.theta
    n = float(q.n)
    mean = n * theta * theta
    if mean <= 0:
        raise ValueError("degenerate N theta^2 = 0")
    cheb = chebyshev_deficit(q.n, q.epsilon, q.delta)
    ratio = q.c / (n ** (1.0 - q.alpha) * theta * theta)
    pz = (1.0 - ratio) ** 2 / (1.0 + (1.0 + 2.0 * theta - 3.0 * theta * theta) / mean) if ratio < 1 else 0.0
    # theta**N in log space; it underflows to 0.0 only when below ~1e-308
    full = math.exp(n * math.log(theta)) if theta > 0 else 0.0
    return max(0.0, 1.0 - cheb), max(0.0, pz - full - cheb)


def minimum_removed_size(n: int, c: float, alpha: float) -> int:
    """``ceil(c * n**alpha)``, ignoring float noise just above an integer."""
    if not c > 0 or not 0 <= alpha < 1:
        raise ValueError("need c > 0 and alpha in [0, 1)")
    x = c * float(n) ** alpha
    r = round(x)
    if abs(x - r) <= 1e-9 * max(1.0, x):
        return int(r)
    return math.ceil(x)


def table1() -> list[dict]:
    """Evaluate the guarantee on the reference rows.

    One row (eps=0.1, delta=0.0399) sits just outside ``delta < eps/sqrt(2 pi)``;
    the formula is still evaluated there and ``hypothesis_holds`` is False.
    """
    rows = []
    for n, eps, delta, alpha in TABLE1_ROWS:
        q = TorusGuaranteeQuery(n, eps, delta, 1.0, alpha, check_hypothesis=False)
        general, with_size = torus_guarantee(q)
        rows.append(
            {
                "n": n,
                "epsilon": eps,
                "delta": delta,
                "alpha": alpha,
                "min_removed_size": minimum_removed_size(n, 1.0, alpha),
                "theta": q.theta,
                "bound_general": general,
                "bound": with_size,
                "hypothesis_holds": q.hypothesis_holds,
            }
        )
    return rows
