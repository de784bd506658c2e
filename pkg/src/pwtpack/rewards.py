"""Item reward functions r1..r7 and the increased expected weight.

The scalar ``_rN`` helpers take plain floats and are shared with the
pure-Python packing kernel; the compiled kernel mirrors them line by line
so both backends produce bit-identical scores.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import ScoringError, ValidationError
from .model import Item, TourContext
from .objective import PackingPlan, StochasticSpec

REWARDS = ("r1", "r2", "r3", "r4", "r5", "r6", "r7")
STATIC_REWARDS = ("r1", "r2", "r3")
ITERATIVE_REWARDS = ("r4", "r5")
STOCHASTIC_REWARDS = ("r6", "r7")
CODE = {name: k for k, name in enumerate(REWARDS, start=1)}
NAME = {k: name for name, k in CODE.items()}

# kernel bound codes
DETERMINISTIC, HOEFFDING, CHEBYSHEV = 0, 1, 2


@dataclass(frozen=True)
class RewardSpec:
    kind: str
    gamma: float = 1.0

    def __post_init__(self):
        if self.kind not in CODE:
            raise ValidationError(f"unknown reward {self.kind!r}; expected one of {REWARDS}")
        if not self.gamma > 0:
            raise ValidationError("gamma must be positive")
        if self.gamma != 1.0 and self.kind != "r1":
            raise ValidationError("gamma applies to r1 only")

    @property
    def code(self) -> int:
        return CODE[self.kind]


def _r1(p, w, d, gamma):
    if d <= 0:
        return math.inf
    return p ** gamma / (w ** gamma * d)


def _r2(p, w, d, R, v_max, nu):
    s = v_max - nu * w
    if s <= 0:
        return None
    return p - R * (d / s - d / v_max)


def _r4(p, w, d, W, R, v_max, nu):
    s1 = v_max - nu * (W + w)
    if s1 <= 0:
        return None
    return p - R * (d / s1 - d / (v_max - nu * W))


def _uncertainty(bound, count, delta, alpha):
    """Growth of the surrogate's uncertainty term when one more item is packed."""
    if bound == HOEFFDING:
        L = math.log(1 / (1 - alpha))
        return delta * (math.sqrt(2 * (count + 1) * L) - math.sqrt(2 * count * L))
    if bound == CHEBYSHEV:
        s2 = delta * delta / 3.0
        return math.sqrt(alpha / (1 - alpha)) * (math.sqrt((count + 1) * s2) - math.sqrt(count * s2))
    return 0.0


def _raise_speed(item):
    raise ScoringError(f"item {item.id}: hypothetical speed is nonpositive")


def score_r1(item: Item, d_i: float, gamma: float = 1.0) -> float:
    return _r1(item.profit, item.weight, d_i, gamma)


def score_r2(item: Item, d_i: float, R: float, v_max: float, nu: float) -> float:
    r = _r2(item.profit, item.weight, d_i, R, v_max, nu)
    if r is None:
        _raise_speed(item)
    return r


def score_r3(item: Item, d_i: float, R: float, v_max: float, nu: float) -> float:
    return score_r2(item, d_i, R, v_max, nu) / item.weight


def score_r4(item: Item, d_i: float, W_i: float, R: float, v_max: float, nu: float) -> float:
    r = _r4(item.profit, item.weight, d_i, W_i, R, v_max, nu)
    if r is None:
        _raise_speed(item)
    return r


def score_r5(item: Item, d_i: float, W_i: float, R: float, v_max: float, nu: float) -> float:
    return score_r4(item, d_i, W_i, R, v_max, nu) / item.weight


def score_r6(item: Item, d_i: float, W_i: float, w_prime: float,
             R: float, v_max: float, nu: float) -> float:
    r = _r4(item.profit, w_prime, d_i, W_i, R, v_max, nu)
    if r is None:
        _raise_speed(item)
    return r


def score_r7(item: Item, d_i: float, W_i: float, w_prime: float,
             R: float, v_max: float, nu: float) -> float:
    return score_r6(item, d_i, W_i, w_prime, R, v_max, nu) / w_prime


def bound_code(spec: Optional[StochasticSpec]) -> int:
    if spec is None:
        return DETERMINISTIC
    return HOEFFDING if spec.resolved_bound == "hoeffding" else CHEBYSHEV


@dataclass
class ScoreState:
    """What the iterative rewards need to know about the plan built so far."""

    ctx: TourContext
    picked: PackingPlan
    suffix_weight: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        n = len(self.ctx.tour)
        per_pos = np.zeros(n)
        for k in np.flatnonzero(self.picked.selected):
            per_pos[self.ctx.item_pos[k]] += self.ctx.instance.weights[k]
        # picked weight at tour positions >= q
        self.suffix_weight = np.cumsum(per_pos[::-1])[::-1]

    @property
    def plan_stats(self) -> tuple[int, float, float]:
        return self.picked.count, self.picked.mu_y, self.picked.var_y

    def add(self, item_id: int) -> None:
        self.picked.add(item_id)
        self.__post_init__()


def suffix_weight(state: ScoreState, ctx: TourContext, city: int) -> float:
    """Weight of picked items at or after ``city``'s tour position (expected weights)."""
    return float(state.suffix_weight[ctx.pos_of_city[city]])


def increased_expected_weight(item: Item, state: ScoreState, spec: StochasticSpec) -> float:
    return item.weight + _uncertainty(bound_code(spec), state.picked.count, spec.delta, spec.alpha)


def score(kind, item: Item, state: ScoreState, spec: Optional[StochasticSpec] = None,
          gamma: float = 1.0) -> float:
    """Score ``item`` with reward ``kind`` given the current state."""
    rs = kind if isinstance(kind, RewardSpec) else RewardSpec(kind, gamma)
    ctx = state.ctx
    inst = ctx.instance
    d = float(ctx.item_d[item.id - 1])
    W = suffix_weight(state, ctx, item.city)
    args = (inst.renting_rate, inst.v_max, ctx.nu)
    if rs.kind == "r1":
        return score_r1(item, d, rs.gamma)
    if rs.kind == "r2":
        return score_r2(item, d, *args)
    if rs.kind == "r3":
        return score_r3(item, d, *args)
    if rs.kind == "r4":
        return score_r4(item, d, W, *args)
    if rs.kind == "r5":
        return score_r5(item, d, W, *args)
    if spec is None:
        raise ValidationError(f"{rs.kind} needs a stochastic spec")
    wp = increased_expected_weight(item, state, spec)
    if rs.kind == "r6":
        return score_r6(item, d, W, wp, *args)
    return score_r7(item, d, W, wp, *args)
