import itertools
import math

import numpy as np
import pytest

from pwtpack.errors import EvaluationError, OracleCapError
from pwtpack.gen import generate_instance, random_small_instance
from pwtpack.model import build_context, nn_tour
from pwtpack.objective import PackingPlan, StochasticSpec, evaluate, is_feasible
from pwtpack.validate import brute_force_optimal, monte_carlo_violation


def enumerate_best(ctx, spec=None):
    """Plain itertools enumeration through the public evaluate()."""
    inst = ctx.instance
    ids = range(1, inst.n_items + 1)
    best = None
    for r in range(inst.n_items + 1):
        for combo in itertools.combinations(ids, r):
            plan = PackingPlan.from_ids(inst, combo, spec)
            if not is_feasible(plan, ctx, spec):
                continue
            try:
                z = evaluate(ctx, plan)
            except EvaluationError:
                continue
            if best is None or z > best[0] + 1e-9 * max(1, abs(best[0])):
                best = (z, combo)
    return best


def test_toy4_oracle(toy4_ctx):
    plan, z = brute_force_optimal(toy4_ctx)
    assert plan.items == [1, 3] and z == pytest.approx(64.0, rel=1e-12)


def test_toy4_zero_capacity(toy4):
    ctx = build_context(toy4.with_capacity(0), [1, 2, 3, 4])
    plan, z = brute_force_optimal(ctx)
    assert plan.items == [] and z == -4.0


def test_toy4_chance_oracle(toy4_ctx):
    spec = StochasticSpec(2.0, 0.9, "chebyshev")
    plan, z = brute_force_optimal(toy4_ctx, spec)
    # only singletons and {e2,e3} (10 + 3*sqrt(8/3) = 14.9) pass the filter
    assert plan.items == [2, 3]
    assert z == pytest.approx(50 - (1 + 1 + 1 / 0.7 + 1 / 0.4), rel=1e-12)


def test_cap():
    inst = generate_instance(26, "unc", seed=0)
    ctx = build_context(inst, nn_tour(inst))
    with pytest.raises(OracleCapError):
        brute_force_optimal(ctx)


def test_matches_itertools_enumeration(rng):
    for _ in range(60):
        inst = random_small_instance(rng, max_items=10)
        ctx = build_context(inst, nn_tour(inst, int(rng.integers(100))))
        spec = None if rng.random() < 0.5 else StochasticSpec(float(rng.uniform(0, 10)), 0.9)
        plan, z = brute_force_optimal(ctx, spec)
        zr, combo = enumerate_best(ctx, spec)
        assert z == pytest.approx(zr, rel=1e-9, abs=1e-9)
        assert is_feasible(plan, ctx, spec)


def test_oracle_monotone_in_capacity(rng):
    for _ in range(20):
        inst = random_small_instance(rng, max_items=10)
        tour = nn_tour(inst)
        zs = [brute_force_optimal(build_context(inst.with_capacity(b), tour))[1]
              for b in np.linspace(1, sum(inst.weights), 5)]
        assert all(a <= b + 1e-9 for a, b in zip(zs, zs[1:]))


def test_tie_break_prefers_fewer_items():
    from pwtpack.model import Instance, Item
    # R = 0: items with zero distance effect; item 3 equals items 1+2 in profit
    inst = Instance("tie", ((0, 0), (1, 0)), (Item(1, 1, 1, 2), Item(2, 1, 1, 2), Item(3, 2, 2, 2)),
                    2, 0.0, 1.0, 0.1, "EUC_2D")
    plan, z = brute_force_optimal(build_context(inst, [1, 2]))
    assert plan.items == [3] and z == 2.0


def test_mc_bounded_support(toy4):
    spec = StochasticSpec(2.0, 0.9)
    plan = PackingPlan.from_ids(toy4, [2, 3])
    assert monte_carlo_violation(plan, spec, 14.0, 20000) == (0.0, 0.0)
    assert monte_carlo_violation(plan, spec, 5.9, 20000) == (1.0, 0.0)
    assert monte_carlo_violation(PackingPlan(toy4), spec, 0.0, 100) == (0.0, 0.0)


def test_mc_uniform_tail():
    from pwtpack.model import Instance, Item
    inst = Instance("one", ((0, 0), (1, 0)), (Item(1, 5, 10, 2),), 11, 1, 1, 0.1, "EUC_2D")
    plan = PackingPlan.from_ids(inst, [1])
    rate, se = monte_carlo_violation(plan, StochasticSpec(2.0, 0.9), 11.0, 100_000, seed=4)
    assert abs(rate - 0.25) <= 3 * se
    assert se == pytest.approx(math.sqrt(rate * (1 - rate) / 100_000))


def test_mc_deterministic(toy4):
    plan = PackingPlan.from_ids(toy4, [1, 2])
    spec = StochasticSpec(3.0, 0.9)
    assert monte_carlo_violation(plan, spec, 15.5, 30000, 7) == monte_carlo_violation(plan, spec, 15.5, 30000, 7)
    with pytest.raises(ValueError):
        monte_carlo_violation(plan, spec, 15.5, 0)
