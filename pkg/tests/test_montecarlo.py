import math

import numpy as np
import pytest

from isingstab.graphs import build_complete, build_kings, build_star, build_torus
from isingstab.montecarlo import (
    EmpiricalResult,
    MomentEstimate,
    TrialPlan,
    estimate_full_removal,
    estimate_gap_probability,
    estimate_removed_stats,
    gap_trial,
    sample_instance,
    scan_rh_over_n,
    torus_removed_sizes,
)
from isingstab.perturbation import PerturbationSpec
from isingstab.solvers import AnnealerParams
from isingstab.special import gaussian_central_mass


def test_sample_instance_deterministic_and_fieldless():
    g = build_kings(3, 3)
    a, b = sample_instance(g, True, 7), sample_instance(g, True, 7)
    assert np.array_equal(a.couplings, b.couplings) and np.array_equal(a.fields, b.fields)
    c = sample_instance(g, False, 7)
    assert np.all(c.fields == 0.0)


def test_sample_moments():
    g = build_torus([100000])
    J = sample_instance(g, False, 123).couplings
    assert abs(J.mean()) <= 3 / math.sqrt(J.size)
    assert abs(J.var() - 1) <= 0.05


def test_empirical_result_fields():
    r = EmpiricalResult(30, 40)
    assert r.estimate == 0.75
    assert r.standard_error == pytest.approx(math.sqrt(0.75 * 0.25 / 40))
    m = MomentEstimate.from_samples(np.array([1.0, 2.0, 3.0]))
    assert m.estimate == 2.0 and m.standard_error == pytest.approx(1 / math.sqrt(3))


def test_gap_zero_delta_always_succeeds():
    plan = TrialPlan(build_complete(5), PerturbationSpec.uniform(0.0, 0), 0.01, 30, 1)
    res = estimate_gap_probability(plan, keep_records=True)
    assert res.successes == 30
    assert all(r["gap"] == 0.0 for r in res.records)


def test_gap_nonnegative_and_certificate():
    g = build_complete(8)
    plan = TrialPlan(g, PerturbationSpec.roundoff(9), 0.5, 40, 5)
    res = estimate_gap_probability(plan, keep_records=True)
    assert all(r["gap"] >= 0 for r in res.records)
    certified = [r for r in res.records if r["certified"]]
    assert certified
    assert all(r["success"] for r in certified)
    assert {b.method for b in res.bounds} == {"uniform", "graph_structured", "complete_graph"}


def test_gap_deterministic_across_workers():
    plan = TrialPlan(build_star(6), PerturbationSpec.uniform(0.05, 0), 0.05, 24, 99)
    a = estimate_gap_probability(plan, workers=1, keep_records=True)
    b = estimate_gap_probability(plan, workers=4, keep_records=True)
    assert a == b
    assert gap_trial(plan, 3) == a.records[3]


def test_plan_validation():
    with pytest.raises(ValueError):
        TrialPlan(build_star(3), PerturbationSpec.roundoff(3), 0.1, 0, 1)
    with pytest.raises(ValueError):
        TrialPlan(build_star(3), PerturbationSpec.roundoff(3), 0.0, 10, 1)


def test_removed_sizes_count():
    J = np.array([[0.1, 0.1, 2.0, 0.1, 0.1], [0.1] * 5])
    # vertex x sits between bonds x-1 and x; vertices 0, 1, 4 go
    assert torus_removed_sizes(J, 0.5).tolist() == [3, 5]


@pytest.mark.parametrize("n", [10, 50])
@pytest.mark.parametrize("delta", [0.25, 0.5, 1.0])
def test_removed_moments_agree(n, delta):
    m1, m2 = estimate_removed_stats(n, delta, 4000, seed=n * 7 + int(delta * 100))
    assert abs(m1.estimate - m1.theoretical) <= 3 * m1.standard_error
    assert abs(m2.estimate - m2.theoretical) <= 3 * m2.standard_error


def test_huge_delta_removes_everything():
    m1, _ = estimate_removed_stats(20, 10.0, 200, seed=0)
    assert m1.estimate == 20.0


def test_full_removal_frequency():
    res = estimate_full_removal(4, 1.5, 20000, seed=3)
    theta = gaussian_central_mass(1.5)
    assert res.theoretical_bound == pytest.approx(theta**4)
    assert abs(res.estimate - theta**4) <= 3 * res.standard_error


def test_rh_scan_1d_limit():
    rows = scan_rh_over_n(1, [100000], 1, "exact_1d", seed=0)
    target = 2 * math.sqrt(2 / math.pi)
    assert abs(rows[0]["r_h_over_n"] - target) <= 0.02 * target


def test_rh_scan_anchors_and_determinism():
    p = AnnealerParams(sweeps=200, restarts=1)
    rows = scan_rh_over_n(2, [6, 8], 2, "anneal", seed=4, annealer=p)
    again = scan_rh_over_n(2, [6, 8], 2, "anneal", seed=4, annealer=p, workers=3)
    assert rows == again
    for r in rows:
        assert r["lower_anchor"] <= r["r_h"] <= r["upper_anchor"]
        assert r["n"] == r["side"] ** 2


def test_rh_scan_upper_limit_sampled():
    # (2/N) sum|J| stays below 2 d sqrt(2/pi) (1.02) at N >= 1e4
    for d, L in [(1, 10000), (2, 100), (3, 22)]:
        row = scan_rh_over_n(d, [L], 1, "exact_1d" if d == 1 else "anneal", seed=1, annealer=AnnealerParams(sweeps=0))[0]
        assert row["upper_anchor"] / row["n"] <= 2 * d * 1.02 * math.sqrt(2 / math.pi)


def test_rh_scan_rejects_mismatch():
    with pytest.raises(ValueError):
        scan_rh_over_n(2, [5], 1, "exact_1d", seed=0)
    with pytest.raises(ValueError):
        scan_rh_over_n(1, [5], 1, "magic", seed=0)
