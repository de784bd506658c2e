"""Objective, capacity check and chance-constraint surrogate weights."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from .errors import EvaluationError, ValidationError
from .model import Instance, TourContext

BOUNDS = ("hoeffding", "chebyshev", "auto")
AUTO_THRESHOLD = 0.95


@dataclass(frozen=True)
class StochasticSpec:
    """Uniform weight noise on ``[mu - delta, mu + delta]`` and a confidence level.

    Expected weights are the instance's nominal weights; every item has
    variance ``delta**2 / 3``.
    """

    delta: float
    alpha: float
    bound: str = "auto"

    def __post_init__(self):
        if not 0 < self.alpha < 1:
            raise ValidationError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.delta < 0:
            raise ValidationError(f"delta must be nonnegative, got {self.delta}")
        bound = self.bound.lower()
        if bound not in BOUNDS:
            raise ValidationError(f"bound must be one of {BOUNDS}, got {self.bound!r}")
        object.__setattr__(self, "bound", bound)

    @property
    def item_variance(self) -> float:
        return self.delta * self.delta / 3.0

    @property
    def resolved_bound(self) -> str:
        if self.bound != "auto":
            return self.bound
        return "chebyshev" if self.alpha < AUTO_THRESHOLD else "hoeffding"

    def sigma_sq(self, m: int) -> np.ndarray:
        return np.full(m, self.item_variance)


class PackingPlan:
    """Binary selection over an instance's items with cached aggregates.

    Item ids are 1-based everywhere in the public API.
    """

    def __init__(self, instance: Instance, spec: Optional[StochasticSpec] = None):
        self.instance = instance
        self.spec = spec
        self.selected = np.zeros(instance.n_items, dtype=bool)
        self.total_weight = 0.0
        self.total_profit = 0.0
        self.count = 0

    @classmethod
    def from_ids(cls, instance, ids: Iterable[int], spec=None) -> PackingPlan:
        plan = cls(instance, spec)
        for i in ids:
            plan.add(i)
        return plan

    @classmethod
    def from_mask(cls, instance, mask, spec=None) -> PackingPlan:
        return cls.from_ids(instance, (int(k) + 1 for k in np.flatnonzero(mask)), spec)

    @property
    def mu_y(self) -> float:
        return self.total_weight

    @property
    def var_y(self) -> float:
        # identical variances, so count * sigma^2 is exact and order independent
        if self.spec is None:
            return 0.0
        return self.count * self.spec.item_variance

    @property
    def items(self) -> list[int]:
        return [int(k) + 1 for k in np.flatnonzero(self.selected)]

    def _item(self, item_id: int):
        if not 1 <= item_id <= self.instance.n_items:
            raise ValidationError(f"unknown item id {item_id}")
        return self.instance.items[item_id - 1]

    def add(self, item_id: int) -> None:
        item = self._item(item_id)
        if self.selected[item_id - 1]:
            raise ValidationError(f"item {item_id} already selected")
        self.selected[item_id - 1] = True
        self.total_weight += item.weight
        self.total_profit += item.profit
        self.count += 1

    def remove(self, item_id: int) -> None:
        item = self._item(item_id)
        if not self.selected[item_id - 1]:
            raise ValidationError(f"item {item_id} is not selected")
        self.selected[item_id - 1] = False
        self.total_weight -= item.weight
        self.total_profit -= item.profit
        self.count -= 1
        if self.count == 0:
            self.total_weight = self.total_profit = 0.0

    def copy(self) -> PackingPlan:
        other = PackingPlan(self.instance, self.spec)
        other.selected = self.selected.copy()
        other.total_weight = self.total_weight
        other.total_profit = self.total_profit
        other.count = self.count
        return other

    def __contains__(self, item_id) -> bool:
        return bool(self.selected[item_id - 1])

    def __repr__(self):
        return f"PackingPlan(items={self.items}, weight={self.total_weight:g})"

    def to_dict(self, ctx: TourContext, spec: Optional[StochasticSpec] = None) -> dict:
        spec = spec if spec is not None else self.spec
        return {
            "selected": self.items,
            "objective": evaluate(ctx, self),
            "weight": self.total_weight,
            "surrogate_weight": None if spec is None else surrogate_weight(self, spec),
        }

    def to_json(self, ctx, spec=None) -> str:
        return json.dumps(self.to_dict(ctx, spec))


def _speed(v_max: float, nu: float, w: float) -> float:
    # keeps an empty load well defined when nu is infinite (capacity 0)
    return v_max if w == 0 else v_max - nu * w


def position_weights(ctx: TourContext, plan: PackingPlan) -> np.ndarray:
    """Accumulated picked weight after each tour position."""
    per_pos = np.zeros(len(ctx.tour))
    for k in np.flatnonzero(plan.selected):
        per_pos[ctx.item_pos[k]] += ctx.instance.weights[k]
    out = np.empty_like(per_pos)
    acc = 0.0
    for q in range(len(per_pos)):
        acc += per_pos[q]
        out[q] = acc
    return out


def evaluate(ctx: TourContext, plan: PackingPlan, weight_view: str = "nominal") -> float:
    """Total profit minus rent for the travel time of the fixed tour.

    ``weight_view="expected"`` uses expected weights, which for uniform
    noise are the nominal weights, so both views give the same number.
    """
    if weight_view not in ("nominal", "expected"):
        raise ValueError(f"unknown weight view {weight_view!r}")
    inst = ctx.instance
    W = position_weights(ctx, plan)
    t = 0.0
    for q in range(len(W)):
        v = _speed(inst.v_max, ctx.nu, W[q])
        if v <= 0:
            raise EvaluationError(
                f"nonpositive speed after tour position {q + 1} (load {W[q]:g})", position=q + 1)
        t += ctx.seg_len[q] / v
    profit = float(inst.profits[plan.selected].sum()) if plan.count else 0.0
    return profit - inst.renting_rate * t


def evaluate_delta(ctx: TourContext, plan: PackingPlan, item: int, current_z: float) -> float:
    """Objective after adding ``item``, re-timing only legs from its city onward."""
    if item in plan:
        raise ValidationError(f"item {item} is already selected")
    inst = ctx.instance
    k = item - 1
    w = inst.weights[k]
    p0 = int(ctx.item_pos[k])
    W = position_weights(ctx, plan)
    diff = 0.0
    for q in range(p0, len(W)):
        v_new = _speed(inst.v_max, ctx.nu, W[q] + w)
        if v_new <= 0:
            raise EvaluationError(
                f"nonpositive speed after tour position {q + 1}", position=q + 1)
        diff += ctx.seg_len[q] / v_new - ctx.seg_len[q] / _speed(inst.v_max, ctx.nu, W[q])
    return current_z + inst.profits[k] - inst.renting_rate * diff


def check_capacity(plan: PackingPlan, capacity: float) -> bool:
    return plan.total_weight <= capacity


def hoeffding_weight(mu: float, count: int, delta: float, alpha: float) -> float:
    return mu + delta * math.sqrt(2 * count * math.log(1 / (1 - alpha)))


def chebyshev_weight(mu: float, var: float, alpha: float) -> float:
    return mu + math.sqrt(alpha / (1 - alpha)) * math.sqrt(var)


def surrogate_weight_hoeffding(plan: PackingPlan, spec: StochasticSpec) -> float:
    return hoeffding_weight(plan.mu_y, plan.count, spec.delta, spec.alpha)


def surrogate_weight_chebyshev(plan: PackingPlan, spec: StochasticSpec) -> float:
    return chebyshev_weight(plan.mu_y, plan.count * spec.item_variance, spec.alpha)


def surrogate_weight(plan: PackingPlan, spec: StochasticSpec) -> float:
    if spec.resolved_bound == "hoeffding":
        return surrogate_weight_hoeffding(plan, spec)
    return surrogate_weight_chebyshev(plan, spec)


def is_feasible(plan: PackingPlan, ctx: TourContext, spec: Optional[StochasticSpec] = None) -> bool:
    """Deterministic capacity check, or the surrogate check when ``spec`` is given."""
    if spec is None:
        return check_capacity(plan, ctx.instance.capacity)
    return surrogate_weight(plan, spec) <= ctx.instance.capacity
