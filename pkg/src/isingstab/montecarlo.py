"""Seeded Monte Carlo validation of the probabilistic statements.

Randomness: every trial draws from its own ``numpy.random.Generator``
(PCG64) seeded with ``[master_seed, trial_index, stream]``, and Gaussian
variates come from ``Generator.standard_normal``.  Results therefore do not
depend on execution order or worker count.  Changing either choice changes
golden outputs.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .bounds import StabilityReport, applicable_bounds
from .compression import removed_size_moments
from .graphs import Graph, build_torus
from .hamiltonian import IsingInstance, energy, range_exact, v_h
from .perturbation import PerturbationSpec
from .solvers import AnnealerParams, anneal_extremes, extremes_1d_torus, ground_state_exact
from .special import gaussian_central_mass

_INSTANCE, _NOISE = 0, 1


def trial_rng(master_seed: int, trial: int, stream: int = _INSTANCE) -> np.random.Generator:
    return np.random.default_rng([int(master_seed), int(trial), int(stream)])


def sample_instance(g: Graph, with_fields: bool, seed) -> IsingInstance:
    """i.i.d. standard Gaussian couplings (and fields when ``with_fields``)."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    J = rng.standard_normal(g.n_edges)
    h = rng.standard_normal(g.n) if with_fields else np.zeros(g.n)
    return IsingInstance(g, J, h)


@dataclass(frozen=True)
class EmpiricalResult:
    successes: int
    trials: int
    theoretical_bound: float | None = None
    bounds: tuple[StabilityReport, ...] = ()
    records: tuple[dict, ...] = field(default=(), repr=False)

    @property
    def estimate(self) -> float:
        return self.successes / self.trials

    @property
    def standard_error(self) -> float:
        p = self.estimate
        return math.sqrt(p * (1.0 - p) / self.trials)

    def to_json(self, verbose: bool = False) -> dict:
        out = {
            "successes": self.successes,
            "trials": self.trials,
            "estimate": self.estimate,
            "standard_error": self.standard_error,
            "theoretical_bound": self.theoretical_bound,
            "bounds": [b.to_json() for b in self.bounds],
        }
        if verbose:
            out["records"] = list(self.records)
        return out


@dataclass(frozen=True)
class MomentEstimate:
    """Sample mean of a per-trial quantity with its normal-approximation s.e."""

    estimate: float
    standard_error: float
    trials: int
    theoretical: float | None = None

    @classmethod
    def from_samples(cls, x: np.ndarray, theoretical: float | None = None) -> "MomentEstimate":
        x = np.asarray(x, dtype=np.float64)
        se = float(x.std(ddof=1) / math.sqrt(x.size)) if x.size > 1 else 0.0
        return cls(float(x.mean()), se, int(x.size), theoretical)

    def to_json(self) -> dict:
        return {
            "estimate": self.estimate,
            "standard_error": self.standard_error,
            "trials": self.trials,
            "theoretical": self.theoretical,
        }


@dataclass(frozen=True)
class TrialPlan:
    graph: Graph
    perturbation: PerturbationSpec
    epsilon: float
    trials: int
    master_seed: int
    with_fields: bool = True

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")


def _map(fn, items, workers: int):
    if workers <= 1:
        return list(map(fn, items))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def gap_trial(plan: TrialPlan, t: int) -> dict:
    """One trial of the ground-state gap experiment, fully determined by ``t``."""
    inst = sample_instance(plan.graph, plan.with_fields, trial_rng(plan.master_seed, t, _INSTANCE))
    pert = plan.perturbation.apply(inst, seed=trial_rng(plan.master_seed, t, _NOISE))
    gs = ground_state_exact(inst)
    gs_pert = ground_state_exact(pert)
    e_min, e_max, r_h = range_exact(inst)
    gap = energy(inst, gs_pert.config) - gs.energy
    vh = v_h(inst)
    delta = plan.perturbation.delta
    return {
        "trial": t,
        "gap": gap,
        "r_h": r_h,
        "v_h": vh,
        "success": bool(0.0 <= gap <= plan.epsilon * r_h),
        "certified": bool(delta * plan.graph.k_g <= 0.5 * plan.epsilon * math.sqrt(vh)),
    }


def estimate_gap_probability(plan: TrialPlan, workers: int = 1, keep_records: bool = False) -> EmpiricalResult:
    """Empirical ``P(0 <= H(gs of H_delta) - H(gs of H) <= eps R_H)``.

    Ground states and ``R_H`` come from exhaustive enumeration, so the graph
    must be within the brute-force cap.
    """
    records = _map(lambda t: gap_trial(plan, t), range(plan.trials), workers)
    successes = sum(r["success"] for r in records)
    reports = tuple(applicable_bounds(plan.graph, plan.perturbation.delta, plan.epsilon))
    best = max(r.probability_lower_bound for r in reports)
    return EmpiricalResult(successes, plan.trials, best, reports, tuple(records) if keep_records else ())


def torus_removed_sizes(couplings_cyclic: np.ndarray, delta: float) -> np.ndarray:
    """``|V\\V0|`` for each row of 1-D torus couplings in cycle order."""
    weak = np.abs(couplings_cyclic) < delta
    # vertex x touches bonds x-1 and x
    return np.sum(weak & np.roll(weak, 1, axis=-1), axis=-1)


def _torus_couplings(n: int, trials: int, seed: int) -> np.ndarray:
    return np.stack([trial_rng(seed, t).standard_normal(n) for t in range(trials)])


def estimate_removed_stats(n: int, delta: float, trials: int, seed: int) -> tuple[MomentEstimate, MomentEstimate]:
    """Empirical first and second moments of ``|V\\V0|`` on the 1-D torus."""
    if n < 3:
        raise ValueError("n must be >= 3")
    sizes = torus_removed_sizes(_torus_couplings(n, trials, seed), delta).astype(np.float64)
    m1, m2 = removed_size_moments(n, gaussian_central_mass(delta))
    return MomentEstimate.from_samples(sizes, m1), MomentEstimate.from_samples(sizes**2, m2)


def estimate_full_removal(n: int, delta: float, trials: int, seed: int) -> EmpiricalResult:
    """Frequency of ``V\\V0 = V``; its probability is ``theta**n``."""
    sizes = torus_removed_sizes(_torus_couplings(n, trials, seed), delta)
    return EmpiricalResult(int(np.sum(sizes == n)), trials, gaussian_central_mass(delta) ** n)


def scan_rh_over_n(
    dims: int,
    sizes,
    trials_per_size: int,
    solver: str,
    seed: int,
    annealer: AnnealerParams | None = None,
    workers: int = 1,
) -> list[dict]:
    """Sampled ``R_H / N`` on zero-field d-dimensional tori.

    ``sizes`` are side lengths (``N = L**dims``).  With ``solver="anneal"``
    the reported ``r_h`` is ``max_est - min_est``, a lower estimate of R_H.
    """
    if solver not in ("exact_1d", "anneal"):
        raise ValueError(f"unknown solver {solver!r}")
    if solver == "exact_1d" and dims != 1:
        raise ValueError("exact_1d solver needs dims == 1")
    jobs = [(L, t) for L in sizes for t in range(trials_per_size)]

    def run(job):
        L, t = job
        g = build_torus([L] * dims)
        inst = sample_instance(g, False, trial_rng(seed, t, 1000 + L))
        if solver == "exact_1d":
            lo, hi = extremes_1d_torus(inst)
        else:
            base = annealer or AnnealerParams()
            params = AnnealerParams(**{**base.to_json(), "seed": int(seed) * 1_000_003 + L * 1009 + t})
            lo, hi, _ = anneal_extremes(inst, params)
        abs_sum = float(np.abs(inst.couplings).sum())
        return {
            "dims": dims,
            "side": L,
            "n": g.n,
            "trial": t,
            "r_h": hi - lo,
            "r_h_over_n": (hi - lo) / g.n,
            "lower_anchor": abs_sum / math.sqrt(g.n),
            "upper_anchor": 2.0 * abs_sum,
        }

    return _map(run, jobs, workers)
