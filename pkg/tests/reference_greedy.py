"""Slow reference for the greedy loop, built from the public scoring and
objective functions only. Used to cross-check the packing kernels."""

import math

from pwtpack.errors import EvaluationError, ScoringError
from pwtpack.objective import PackingPlan, evaluate, is_feasible
from pwtpack.rewards import ScoreState, score


def _score(kind, item, state, spec, gamma):
    try:
        return score(kind, item, state, spec, gamma if kind == "r1" else 1.0)
    except ScoringError:
        return -math.inf


def reference_pack(ctx, sequence, spec=None, *, gamma=1.0, single_pass=False):
    inst = ctx.instance
    plan = PackingPlan(inst, spec)
    best = evaluate(ctx, plan)

    def order(items):
        state = ScoreState(ctx, plan.copy())
        kind = sequence[plan.count]
        s = {it.id: _score(kind, it, state, spec, gamma) for it in items}
        return sorted(items, key=lambda it: (-s[it.id], it.id))

    remaining = order(list(inst.items))
    c = 0
    while c < len(remaining):
        it = remaining[c]
        trial = plan.copy()
        trial.add(it.id)
        if not is_feasible(trial, ctx, spec):
            c += 1
            continue
        try:
            z = evaluate(ctx, trial)
        except EvaluationError:
            z = -math.inf
        if z < best:
            c += 1
            continue
        plan, best = trial, z
        if single_pass:
            c += 1
            continue
        del remaining[c]
        if remaining:
            remaining = order(remaining)
        c = 0
    return plan, best
