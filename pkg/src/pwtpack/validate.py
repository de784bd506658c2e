"""Ground truth for small instances and empirical chance-constraint checks."""

from __future__ import annotations

import math
from typing import Optional

import numpy as np

from .errors import OracleCapError
from .model import TourContext
from .objective import PackingPlan, StochasticSpec, evaluate

MAX_ORACLE_ITEMS = 24
_MC_CHUNK = 8192


def _subset_masks(m: int, start: int, stop: int) -> np.ndarray:
    codes = np.arange(start, stop, dtype=np.int64)
    return ((codes[:, None] >> np.arange(m, dtype=np.int64)) & 1).astype(bool)


def brute_force_optimal(ctx: TourContext, spec: Optional[StochasticSpec] = None):
    """Enumerate every subset and return ``(plan, z)`` for the best feasible one.

    Ties go to fewer items, then to the lexicographically smallest id set.
    Evaluation is vectorised over subsets and does not share code with the
    greedy kernel.
    """
    inst = ctx.instance
    m = inst.n_items
    if m > MAX_ORACLE_ITEMS:
        raise OracleCapError(f"{m} items exceed the enumeration cap of {MAX_ORACLE_ITEMS}")
    n = len(ctx.tour)
    w = inst.weights
    p = inst.profits
    # incidence[k, q] = 1 when item k is picked up at or before tour position q
    incidence = np.zeros((m, n))
    for k in range(m):
        incidence[k, ctx.item_pos[k]:] = 1.0
    seg = np.asarray(ctx.seg_len)
    B = inst.capacity

    best = None  # (z, ids, mask)
    total = 1 << m
    step = max(1024, (1 << 22) // n)
    for start in range(0, total, step):
        masks = _subset_masks(m, start, min(total, start + step))
        mu = masks @ w
        count = masks.sum(axis=1)
        if spec is None:
            feasible = mu <= B
        elif spec.resolved_bound == "hoeffding":
            feasible = mu + spec.delta * np.sqrt(2 * count * math.log(1 / (1 - spec.alpha))) <= B
        else:
            var = count * (spec.delta ** 2 / 3.0)
            feasible = mu + math.sqrt(spec.alpha / (1 - spec.alpha)) * np.sqrt(var) <= B
        if not feasible.any():
            continue
        masks = masks[feasible]
        load = (masks * w) @ incidence
        with np.errstate(all="ignore"):
            speed = np.where(load > 0, inst.v_max - ctx.nu * load, inst.v_max)
            t = (seg / speed).sum(axis=1)
        z = masks @ p - inst.renting_rate * t
        z = np.where((speed > 0).all(axis=1), z, -np.inf)
        top = z.max()
        if best is not None and not _close(top, best[0]) and top < best[0]:
            continue
        for r in np.flatnonzero(z >= top - 1e-9 * max(1.0, abs(top))):
            ids = tuple(int(k) + 1 for k in np.flatnonzero(masks[r]))
            cand = (float(z[r]), ids, masks[r].copy())
            if best is None or _better(cand, best):
                best = cand
    plan = PackingPlan.from_mask(inst, best[2], spec)
    return plan, evaluate(ctx, plan)


def _close(a: float, b: float) -> bool:
    return abs(a - b) <= 1e-9 * max(1.0, abs(a), abs(b))


def _better(cand, best) -> bool:
    if not _close(cand[0], best[0]):
        return cand[0] > best[0]
    return (len(cand[1]), cand[1]) < (len(best[1]), best[1])


def monte_carlo_violation(plan: PackingPlan, spec: StochasticSpec, capacity: float,
                          samples: int = 100_000, seed: int = 0):
    """Fraction of sampled weight draws that overflow ``capacity``.

    Each selected weight is drawn uniformly from ``[mu - delta, mu + delta]``.
    Samples are produced in fixed-size chunks, each from its own child of the
    seed sequence, so the estimate does not depend on how chunks are scheduled.
    Returns ``(rate, standard_error)``.
    """
    if samples < 1:
        raise ValueError("samples must be at least 1")
    mu = plan.instance.weights[plan.selected]
    n_chunks = -(-samples // _MC_CHUNK)
    children = np.random.SeedSequence(seed).spawn(n_chunks)
    violations = 0
    for c, child in enumerate(children):
        size = min(_MC_CHUNK, samples - c * _MC_CHUNK)
        if len(mu) == 0:
            violations += size if 0.0 > capacity else 0
            continue
        rng = np.random.default_rng(child)
        draws = rng.uniform(mu - spec.delta, mu + spec.delta, size=(size, len(mu)))
        violations += int((draws.sum(axis=1) > capacity).sum())
    rate = violations / samples
    return rate, math.sqrt(rate * (1 - rate) / samples)
