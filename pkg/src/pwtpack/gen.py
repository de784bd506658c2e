"""Synthetic instances in the TTP benchmark style, plus small random ones for testing."""

from __future__ import annotations

import math

import numpy as np

from .model import Instance, Item, build_context, nn_tour
from .objective import PackingPlan, evaluate

KINDS = {"unc": "uncorrelated", "bsc": "bounded strongly corr"}


def generate_instance(n_cities: int = 51, kind: str = "unc", *, items_per_city: int = 1,
                      capacity_category: int = 1, seed: int = 0, coord_range: int = 100,
                      edge_weight_kind: str = "CEIL_2D", renting_rate=None) -> Instance:
    """Benchmark-style instance.

    Weights are uniform integers in [1, 1000]; profits are independent
    uniform integers (``unc``) or weight + 100 (``bsc``). The capacity is
    ``capacity_category / 11`` of the total weight. Unless given, the renting
    rate is the ratio-greedy knapsack profit divided by the time needed to
    carry that knapsack along a nearest-neighbour + 2-opt tour, so that plan
    scores roughly zero.
    """
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {sorted(KINDS)}")
    rng = np.random.default_rng(seed)
    cells = rng.choice((coord_range + 1) ** 2, size=n_cities, replace=False)
    coords = tuple((float(c // (coord_range + 1)), float(c % (coord_range + 1))) for c in cells)
    m = (n_cities - 1) * items_per_city
    weights = rng.integers(1, 1001, size=m)
    if kind == "unc":
        profits = rng.integers(1, 1001, size=m)
    else:
        profits = weights + 100
    cities = [2 + (k % (n_cities - 1)) for k in range(m)]
    items = tuple(Item(k + 1, float(profits[k]), float(weights[k]), cities[k]) for k in range(m))
    capacity = float(math.floor(capacity_category * weights.sum() / 11))
    name = f"gen{n_cities}_n{m}_{kind}_{capacity_category:02d}_s{seed}"
    inst = Instance(name, coords, items, capacity, 1.0, 1.0, 0.1, edge_weight_kind, KINDS[kind])
    if renting_rate is None:
        order = np.argsort(-(profits / weights), kind="stable")
        load, picked = 0, []
        for k in order:
            if load + weights[k] <= capacity:
                load += weights[k]
                picked.append(k + 1)
        # rate at which carrying the greedy knapsack along the tour breaks even
        ctx = build_context(inst, nn_tour(inst, seed))
        plan = PackingPlan.from_ids(inst, picked)
        gain = plan.total_profit
        travel = gain - evaluate(ctx, plan)
        renting_rate = round(gain / travel, 2)
    return Instance(name, coords, items, capacity, float(renting_rate), 1.0, 0.1,
                    edge_weight_kind, KINDS[kind])


def random_small_instance(rng: np.random.Generator, *, min_cities=4, max_cities=12,
                          min_items=3, max_items=15, capacity_frac=(0.3, 0.8)) -> Instance:
    """Tiny random instance for oracle comparisons; several items may share a city."""
    n = int(rng.integers(min_cities, max_cities + 1))
    m = int(rng.integers(min_items, max_items + 1))
    coords = tuple((float(x), float(y)) for x, y in rng.uniform(0, 100, size=(n, 2)))
    items = tuple(
        Item(k + 1, float(rng.integers(1, 101)), float(rng.integers(1, 101)),
             int(rng.integers(2, n + 1)))
        for k in range(m)
    )
    total = sum(it.weight for it in items)
    capacity = float(math.floor(rng.uniform(*capacity_frac) * total))
    kind = "EUC_2D" if rng.random() < 0.5 else "CEIL_2D"
    R = float(rng.uniform(0.05, 1.5))
    v_min = float(rng.choice([0.1, 0.2, 0.5]))
    return Instance(f"rand{n}_{m}", coords, items, max(capacity, 1.0), R, 1.0, v_min, kind)
