"""The greedy packing algorithms and the report they produce.

All four variants share one loop (see ``_kernel.greedy_pack``); they differ
in whether scores are refreshed after each acceptance, which reward is used
at each step, and which capacity test applies. The compiled loop is used
when it was built; set ``PWTPACK_PURE=1`` to force the Python one.
"""

from __future__ import annotations

import json
import os
import time
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import _kernel
from .errors import ConfigurationError
from .model import TourContext
from .objective import PackingPlan, StochasticSpec, surrogate_weight
from .rewards import (CODE, ITERATIVE_REWARDS, NAME, STATIC_REWARDS, RewardSpec, bound_code)

if os.environ.get("PWTPACK_PURE") == "1":
    _ckernel = None
else:
    try:
        from . import _ckernel
    except ImportError:  # extension not built
        _ckernel = None

BACKEND = "cython" if _ckernel is not None else "python"
KERNELS = {"python": _kernel.greedy_pack}
if _ckernel is not None:
    KERNELS["cython"] = _ckernel.greedy_pack


@dataclass
class SolveReport:
    algorithm: str
    reward: str
    mode: str
    alpha: Optional[float]
    delta: Optional[float]
    bound: Optional[str]
    seed: Optional[int]
    objective: float
    total_weight: float
    surrogate_weight: Optional[float]
    items: list
    evaluations: int
    runtime_ms: float
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = asdict(self)
        extra = d.pop("extra")
        d.update(extra)
        return d

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def make_report(algorithm, reward, ctx, plan, z, evaluations, runtime_ms,
                spec=None, seed=None, **extra) -> SolveReport:
    return SolveReport(
        algorithm=algorithm,
        reward=reward,
        mode="deterministic" if spec is None else "chance",
        alpha=None if spec is None else spec.alpha,
        delta=None if spec is None else spec.delta,
        bound=None if spec is None else spec.resolved_bound,
        seed=seed,
        objective=float(z),
        total_weight=float(plan.total_weight),
        surrogate_weight=None if spec is None else surrogate_weight(plan, spec),
        items=plan.items,
        evaluations=int(evaluations),
        runtime_ms=runtime_ms,
        extra=extra,
    )


def run_kernel(ctx: TourContext, codes, *, spec=None, gamma=1.0, single_pass=False,
               ascending=False, trace=None, backend=None):
    """Call the packing loop directly; returns ``(plan, z, evaluations)``."""
    inst = ctx.instance
    kernel = KERNELS[backend or BACKEND]
    selected, z, evals = kernel(
        ctx.seg_len, ctx.item_pos, ctx.item_d, inst.profits, inst.weights,
        float(inst.capacity), float(inst.renting_rate), float(inst.v_max), float(ctx.nu),
        np.asarray(codes, dtype=np.intc), float(gamma), bool(single_pass), bool(ascending),
        bound_code(spec), 0.0 if spec is None else float(spec.delta),
        0.5 if spec is None else float(spec.alpha), trace)
    plan = PackingPlan.from_mask(inst, selected, spec)
    return plan, float(z), int(evals)


def _run(algorithm, label, ctx, codes, spec, gamma, single_pass, ascending, trace, backend):
    t0 = time.perf_counter()
    steps = [] if trace else None
    plan, z, evals = run_kernel(ctx, codes, spec=spec, gamma=gamma, single_pass=single_pass,
                                ascending=ascending, trace=steps, backend=backend)
    ms = (time.perf_counter() - t0) * 1000.0
    extra = {"trace": steps} if trace else {}
    return plan, make_report(algorithm, label, ctx, plan, z, evals, ms, spec=spec, **extra)


def pack_static(ctx: TourContext, reward="r1", *, gamma=1.0, ascending=False,
                trace=False, backend=None):
    """Score once, scan once: the original Pack with a one-time reward."""
    rs = RewardSpec(reward, gamma)
    if rs.kind not in STATIC_REWARDS:
        raise ConfigurationError(f"Pack takes r1, r2 or r3, not {rs.kind}")
    codes = np.full(ctx.instance.n_items, rs.code, dtype=np.intc)
    return _run("Pack", rs.kind, ctx, codes, None, gamma, True, ascending, trace, backend)


def pack_iterative(ctx: TourContext, reward="r5", *, gamma=1.0, ascending=False,
                   trace=False, backend=None):
    """Pack_IH: rescore and restart the scan after every accepted item."""
    rs = RewardSpec(reward, gamma)
    if rs.kind not in STATIC_REWARDS + ITERATIVE_REWARDS:
        raise ConfigurationError(f"Pack_IH takes r1..r5, not {rs.kind}")
    codes = np.full(ctx.instance.n_items, rs.code, dtype=np.intc)
    return _run("Pack_IH", rs.kind, ctx, codes, None, gamma, False, ascending, trace, backend)


def pack_surrogate(ctx: TourContext, reward, spec: StochasticSpec, *, gamma=1.0,
                   ascending=False, trace=False, backend=None):
    """Pack_SF: iterative packing under the surrogate chance constraint."""
    rs = RewardSpec(reward, gamma)
    if rs.kind not in ("r1", "r6", "r7"):
        raise ConfigurationError(f"Pack_SF takes r1, r6 or r7, not {rs.kind}")
    if spec is None:
        raise ConfigurationError("Pack_SF needs a stochastic spec")
    codes = np.full(ctx.instance.n_items, rs.code, dtype=np.intc)
    return _run("Pack_SF", rs.kind, ctx, codes, spec, gamma, False, ascending, trace, backend)


def sequence_codes(hh: Sequence, m: int) -> np.ndarray:
    codes = np.array([CODE[h] if isinstance(h, str) else int(h) for h in hh], dtype=np.intc)
    if len(codes) != m:
        raise ConfigurationError(f"heuristic sequence has length {len(codes)}, expected {m}")
    bad = [int(c) for c in codes if int(c) not in NAME]
    if bad:
        raise ConfigurationError(f"unknown reward codes {bad}")
    return codes


def pack_sequence(ctx: TourContext, hh: Sequence, spec: Optional[StochasticSpec] = None, *,
                  ascending=False, trace=False, backend=None):
    """Pack_HH: after ``a`` acceptances the remaining items are scored with ``hh[a]``."""
    codes = sequence_codes(hh, ctx.instance.n_items)
    if spec is None and np.any(codes >= CODE["r6"]):
        raise ConfigurationError("r6/r7 need a stochastic spec")
    return _run("Pack_HH", "sequence", ctx, codes, spec, 1.0, False, ascending, trace, backend)


def solve(ctx: TourContext, reward: str, spec: Optional[StochasticSpec] = None, *,
          gamma=1.0, backend=None):
    """Run the algorithm paired with ``reward`` (r1-r3 Pack, r4-r5 Pack_IH, chance Pack_SF)."""
    if spec is not None:
        return pack_surrogate(ctx, reward, spec, gamma=gamma, backend=backend)
    if reward in STATIC_REWARDS:
        return pack_static(ctx, reward, gamma=gamma, backend=backend)
    if reward in ITERATIVE_REWARDS:
        return pack_iterative(ctx, reward, gamma=gamma, backend=backend)
    raise ConfigurationError(f"{reward} needs chance-constraint mode")
