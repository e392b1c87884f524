"""Order-preservation thresholds and ground-state stability probability bounds.

Each bound has the form ``1 - chi_square_cdf(k_G, arg)`` where ``k_G = |E| + |V|``
and ``arg`` depends on the method:

* ``uniform``:          ``(2 delta k_G / eps)**2``
* ``graph_structured``: ``(delta |V| (deg G + 1) / eps)**2``
* ``complete_graph``:   ``delta**2 (N + 1)**4 / (4 eps**2)``  (complete graphs only)
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from .graphs import Graph
from .special import chi_square_sf

METHODS = ("uniform", "graph_structured", "complete_graph")
MAX_DIGITS = 128


@dataclass(frozen=True)
class StabilityReport:
    method: str
    delta: float
    epsilon: float
    k_g: int
    max_degree: int
    chi_square_argument: float
    probability_lower_bound: float

    def to_json(self) -> dict:
        return asdict(self)


def _check(delta: float, epsilon: float):
    if not delta >= 0:
        raise ValueError(f"delta must be nonnegative, got {delta}")
    if not epsilon > 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")


def _report(method, delta, epsilon, k_g, deg, arg) -> StabilityReport:
    # survival function is >= 0 by construction, so a vacuous bound reports 0
    prob = chi_square_sf(k_g, arg) if math.isfinite(arg) else 0.0
    return StabilityReport(method, float(delta), float(epsilon), int(k_g), int(deg), float(arg), prob)


def order_preservation_threshold(k_g: int, v_h: float, epsilon: float) -> float:
    """Largest perturbation size delta with ``delta * k_G <= eps * sqrt(v_H) / 2``."""
    if k_g <= 0 or not v_h > 0 or not epsilon > 0:
        raise ValueError("k_g, v_h and epsilon must all be positive")
    return epsilon * math.sqrt(v_h) / (2.0 * k_g)


def bound_uniform(k_g: int, delta: float, epsilon: float, max_degree: int = 0) -> StabilityReport:
    _check(delta, epsilon)
    if k_g <= 0:
        raise ValueError("k_g must be positive")
    arg = (2.0 * delta * k_g / epsilon) ** 2
    return _report("uniform", delta, epsilon, k_g, max_degree, arg)


def bound_graph_structured(g: Graph, delta: float, epsilon: float) -> StabilityReport:
    _check(delta, epsilon)
    arg = (delta * g.n * (g.max_degree + 1) / epsilon) ** 2
    return _report("graph_structured", delta, epsilon, g.k_g, g.max_degree, arg)


def bound_complete_graph(n: int, delta: float, epsilon: float) -> StabilityReport:
    _check(delta, epsilon)
    if n < 1:
        raise ValueError("n must be >= 1")
    arg = delta**2 * (n + 1) ** 4 / (4.0 * epsilon**2)
    return _report("complete_graph", delta, epsilon, n * (n + 1) // 2, n - 1, arg)


def applicable_bounds(g: Graph, delta: float, epsilon: float) -> list[StabilityReport]:
    out = [
        bound_uniform(g.k_g, delta, epsilon, g.max_degree),
        bound_graph_structured(g, delta, epsilon),
    ]
    if g.is_complete:
        out.append(bound_complete_graph(g.n, delta, epsilon))
    return out


def best_bound(g: Graph, delta: float, epsilon: float, family_hint: str | None = None) -> StabilityReport:
    """Tightest applicable bound, i.e. the one with the smallest chi-square argument.

    ``family_hint="complete"`` asserts completeness; otherwise it is detected
    from the edge count.
    """
    if family_hint == "complete" and not g.is_complete:
        raise ValueError("family_hint says complete but the graph is not")
    # k_G is shared, so the smallest argument gives the largest probability
    return min(applicable_bounds(g, delta, epsilon), key=lambda r: r.chi_square_argument)


def bound_by_method(g: Graph, method: str, delta: float, epsilon: float) -> StabilityReport:
    if method == "best":
        return best_bound(g, delta, epsilon)
    if method == "uniform":
        return bound_uniform(g.k_g, delta, epsilon, g.max_degree)
    if method == "graph_structured":
        return bound_graph_structured(g, delta, epsilon)
    if method == "complete_graph":
        if not g.is_complete:
            raise ValueError("complete_graph bound applies only to complete graphs")
        return bound_complete_graph(g.n, delta, epsilon)
    raise ValueError(f"unknown method {method!r}")


def min_digits(g: Graph, epsilon: float, target_probability: float, method: str = "best") -> int:
    """Fewest binary digits N such that delta = 2**-N certifies ``target_probability``."""
    if not 0 < target_probability < 1:
        raise ValueError("target probability must lie in (0, 1)")
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    for bits in range(1, MAX_DIGITS + 1):
        if bound_by_method(g, method, 2.0**-bits, epsilon).probability_lower_bound >= target_probability:
            return bits
    raise ValueError(f"no digit count up to {MAX_DIGITS} reaches probability {target_probability}")

