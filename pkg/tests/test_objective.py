import math

import numpy as np
import pytest

from pwtpack.errors import EvaluationError, ValidationError
from pwtpack.gen import random_small_instance
from pwtpack.model import build_context, distance, nn_tour
from pwtpack.objective import (PackingPlan, StochasticSpec, check_capacity, evaluate,
                               evaluate_delta, is_feasible, surrogate_weight,
                               surrogate_weight_chebyshev, surrogate_weight_hoeffding)


def naive_objective(inst, tour, ids):
    """Straight transcription of the objective, walking the tour city by city."""
    load, t = 0.0, 0.0
    nu = (inst.v_max - inst.v_min) / inst.capacity
    for q, city in enumerate(tour):
        load += sum(it.weight for it in inst.items if it.id in ids and it.city == city)
        nxt = tour[(q + 1) % len(tour)]
        t += distance(inst, city, nxt) / (inst.v_max - nu * load)
    return sum(it.profit for it in inst.items if it.id in ids) - inst.renting_rate * t


@pytest.mark.parametrize("ids,expected", [
    ((), -4.0),
    ((1,), 50 - (1 / 1.0 + 3 / 0.4)),
    ((2,), 20 - (2 + 2 / 0.7)),
    ((3,), 30 - (3 + 1 / 0.7)),
    ((1, 2), 70 - (1 + 1 / 0.4 + 2 / 0.1)),
    ((1, 3), 80 - (1 + 2.5 + 2.5 + 10)),
    ((2, 3), 50 - (1 + 1 + 1 / 0.7 + 1 / 0.4)),
])
def test_toy4_objective(toy4_ctx, ids, expected):
    plan = PackingPlan.from_ids(toy4_ctx.instance, ids)
    assert evaluate(toy4_ctx, plan) == pytest.approx(expected, rel=1e-12)


def test_toy4_headline_values(toy4_ctx):
    inst = toy4_ctx.instance
    assert evaluate(toy4_ctx, PackingPlan(inst)) == -4.0
    assert evaluate(toy4_ctx, PackingPlan.from_ids(inst, [1, 3])) == pytest.approx(64.0, rel=1e-12)
    assert evaluate(toy4_ctx, PackingPlan.from_ids(inst, [2, 3])) == pytest.approx(44.071428571, rel=1e-9)


def test_overload_reports_position(toy4_ctx):
    plan = PackingPlan.from_ids(toy4_ctx.instance, [1, 2, 3])
    with pytest.raises(EvaluationError) as info:
        evaluate(toy4_ctx, plan)
    assert info.value.position == 4  # load 20 after city 4


def test_matches_naive_walk(rng):
    for _ in range(200):
        inst = random_small_instance(rng)
        tour = nn_tour(inst, int(rng.integers(100)))
        ctx = build_context(inst, tour)
        mask = rng.random(inst.n_items) < 0.4
        plan = PackingPlan.from_mask(inst, mask)
        if plan.total_weight > inst.capacity:
            continue
        ids = set(plan.items)
        assert evaluate(ctx, plan) == pytest.approx(naive_objective(inst, tour, ids), rel=1e-9, abs=1e-9)


def test_empty_plan_is_full_speed_rent(rng):
    for _ in range(20):
        inst = random_small_instance(rng)
        ctx = build_context(inst, nn_tour(inst))
        expected = -inst.renting_rate * ctx.total_distance / inst.v_max
        assert evaluate(ctx, PackingPlan(inst)) == pytest.approx(expected, rel=1e-12)


def test_delta_toy4(toy4_ctx):
    plan = PackingPlan.from_ids(toy4_ctx.instance, [3])
    z = evaluate(toy4_ctx, plan)
    assert evaluate_delta(toy4_ctx, plan, 1, z) == pytest.approx(64.0, rel=1e-12)


def test_delta_agrees_with_full_evaluation(rng):
    cases = 0
    while cases < 1000:
        inst = random_small_instance(rng)
        ctx = build_context(inst, nn_tour(inst, int(rng.integers(50))))
        plan = PackingPlan.from_mask(inst, rng.random(inst.n_items) < 0.3)
        free = [i for i in range(1, inst.n_items + 1) if i not in plan]
        if not free:
            continue
        item = int(rng.choice(free))
        if plan.total_weight + inst.weights[item - 1] > inst.capacity:
            continue
        z = evaluate(ctx, plan)
        fast = evaluate_delta(ctx, plan, item, z)
        plan.add(item)
        full = evaluate(ctx, plan)
        assert fast == pytest.approx(full, rel=1e-9, abs=1e-9)
        plan.remove(item)
        assert evaluate(ctx, plan) == z
        cases += 1


def test_plan_aggregates_track_changes(toy4):
    spec = StochasticSpec(2.0, 0.9)
    plan = PackingPlan(toy4, spec)
    plan.add(1)
    plan.add(3)
    plan.remove(1)
    plan.add(2)
    assert plan.items == [2, 3]
    assert (plan.total_weight, plan.total_profit, plan.count) == (10.0, 50.0, 2)
    assert plan.mu_y == 10.0
    assert plan.var_y == pytest.approx(2 * 4 / 3)
    with pytest.raises(ValidationError):
        plan.add(2)
    with pytest.raises(ValidationError):
        plan.remove(1)
    with pytest.raises(ValidationError):
        PackingPlan.from_ids(toy4, [4])


def test_plan_json(toy4_ctx):
    import json
    plan = PackingPlan.from_ids(toy4_ctx.instance, [1, 3])
    data = json.loads(plan.to_json(toy4_ctx))
    assert data == {"selected": [1, 3], "objective": 64.0, "weight": 15.0, "surrogate_weight": None}


def test_check_capacity(toy4):
    assert check_capacity(PackingPlan.from_ids(toy4, [1, 3]), 15)
    assert not check_capacity(PackingPlan.from_ids(toy4, [1, 2, 3]), 15)
    assert check_capacity(PackingPlan(toy4), 15)


def _plan_with(inst, mu_items):
    return PackingPlan.from_ids(inst, mu_items)


def test_hoeffding_numbers(toy4):
    spec = StochasticSpec(2.0, 0.9, "hoeffding")
    plan = PackingPlan.from_ids(toy4, [2, 3])  # mu 10, count 2
    assert surrogate_weight_hoeffding(plan, spec) == pytest.approx(10 + 2 * math.sqrt(4 * math.log(10)), abs=1e-12)
    assert surrogate_weight_hoeffding(plan, spec) == pytest.approx(16.069708, abs=1e-6)
    assert surrogate_weight_hoeffding(PackingPlan(toy4), spec) == 0.0
    one = PackingPlan.from_ids(toy4, [2])
    s = surrogate_weight_hoeffding(one, StochasticSpec(20.0, 0.999))
    assert s - 5.0 == pytest.approx(20 * math.sqrt(2 * math.log(1000)), rel=1e-12)
    assert s - 5.0 == pytest.approx(74.338444, abs=1e-6)


def test_chebyshev_numbers(toy4):
    spec = StochasticSpec(2.0, 0.9, "chebyshev")
    plan = PackingPlan.from_ids(toy4, [2, 3])
    assert surrogate_weight_chebyshev(plan, spec) == pytest.approx(10 + 3 * math.sqrt(8 / 3), abs=1e-12)
    assert surrogate_weight_chebyshev(plan, spec) == pytest.approx(14.898979, abs=1e-6)
    assert surrogate_weight_chebyshev(PackingPlan(toy4), spec) == 0.0
    assert surrogate_weight_chebyshev(plan, StochasticSpec(0.0, 0.9)) == 10.0


def test_auto_bound_threshold():
    assert StochasticSpec(20, 0.9).resolved_bound == "chebyshev"
    assert StochasticSpec(20, 0.999).resolved_bound == "hoeffding"
    assert StochasticSpec(20, 0.95).resolved_bound == "hoeffding"
    assert StochasticSpec(20, 0.9, "HOEFFDING").resolved_bound == "hoeffding"


@pytest.mark.parametrize("kw", [dict(delta=1, alpha=0), dict(delta=1, alpha=1),
                                dict(delta=-1, alpha=0.5), dict(delta=1, alpha=0.5, bound="bernstein")])
def test_spec_validation(kw):
    with pytest.raises(ValidationError):
        StochasticSpec(**kw)


def test_is_feasible_toy4(toy4_ctx):
    inst = toy4_ctx.instance
    plan = PackingPlan.from_ids(inst, [1, 3])
    assert is_feasible(plan, toy4_ctx)
    cheb = StochasticSpec(2.0, 0.9, "chebyshev")
    assert surrogate_weight(plan, cheb) == pytest.approx(19.899, abs=1e-3)
    assert not is_feasible(plan, toy4_ctx, cheb)


def test_surrogate_properties(rng):
    for _ in range(300):
        inst = random_small_instance(rng)
        ctx = build_context(inst, nn_tour(inst))
        plan = PackingPlan.from_mask(inst, rng.random(inst.n_items) < 0.5)
        delta = float(rng.uniform(0.5, 10))
        a1, a2 = sorted(rng.uniform(0.5, 0.999, size=2))
        for bound in ("hoeffding", "chebyshev"):
            lo = surrogate_weight(plan, StochasticSpec(delta, a1, bound))
            hi = surrogate_weight(plan, StochasticSpec(delta, a2, bound))
            assert lo >= plan.mu_y
            if plan.count and a1 < a2:
                assert hi > lo
            zero = StochasticSpec(0.0, a1, bound)
            assert surrogate_weight(plan, zero) == plan.mu_y
            assert is_feasible(plan, ctx, zero) == is_feasible(plan, ctx)
            free = [i for i in range(1, inst.n_items + 1) if i not in plan]
            if free:
                bigger = plan.copy()
                bigger.add(free[0])
                spec = StochasticSpec(delta, a1, bound)
                assert surrogate_weight(bigger, spec) >= surrogate_weight(plan, spec)


def test_feasible_speeds_within_bounds(rng):
    from pwtpack.objective import position_weights
    for _ in range(100):
        inst = random_small_instance(rng)
        ctx = build_context(inst, nn_tour(inst))
        plan = PackingPlan.from_mask(inst, rng.random(inst.n_items) < 0.5)
        if plan.total_weight > inst.capacity:
            continue
        v = inst.v_max - ctx.nu * position_weights(ctx, plan)
        assert np.all(v >= inst.v_min - 1e-12) and np.all(v <= inst.v_max)
