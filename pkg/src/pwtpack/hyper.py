"""Selection hyper-heuristic over per-acceptance reward sequences."""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ConfigurationError
from .model import TourContext
from .objective import StochasticSpec
from .pack import make_report, run_kernel, solve
from .rewards import CODE, NAME

# variant -> (initialisation, low-level heuristic pool in listing order)
VARIANTS = {
    "HH1": ("r1", ("r1", "r2", "r3")),
    "HH2": ("best", ("r1", "r2", "r3")),
    "HH3": ("r1", ("r1", "r2", "r3", "r4", "r5")),
    "HH4": ("best", ("r1", "r2", "r3", "r4", "r5")),
    "HH5": ("r1", ("r1", "r6", "r7")),
    "HH6": ("best", ("r1", "r6", "r7")),
}
CHANCE_VARIANTS = ("HH5", "HH6")


@dataclass(frozen=True)
class HHConfig:
    variant: str
    iterations: int = 1000
    mutation_rate: float = 0.1
    seed: int = 0
    spec: Optional[StochasticSpec] = None
    max_evaluations: Optional[int] = None

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ConfigurationError(f"unknown variant {self.variant!r}")
        if (self.variant in CHANCE_VARIANTS) != (self.spec is not None):
            raise ConfigurationError(
                f"{self.variant} {'needs' if self.spec is None else 'does not take'} chance-constraint flags")
        if self.iterations < 0:
            raise ConfigurationError("iterations must be nonnegative")
        if not 0 <= self.mutation_rate <= 1:
            raise ConfigurationError("mutation rate must lie in [0, 1]")

    @property
    def init(self) -> str:
        return VARIANTS[self.variant][0]

    @property
    def pool(self) -> tuple[str, ...]:
        return VARIANTS[self.variant][1]


def init_sequence(cfg: HHConfig, ctx: TourContext, *, backend=None) -> np.ndarray:
    """Constant sequence of r1, or of the pool member whose own Pack run scores best."""
    m = ctx.instance.n_items
    if cfg.init == "r1":
        return np.full(m, CODE["r1"], dtype=np.intc)
    best, best_z = None, -np.inf
    for name in cfg.pool:
        _, report = solve(ctx, name, cfg.spec, backend=backend)
        if report.objective > best_z:
            best, best_z = name, report.objective
    return np.full(m, CODE[best], dtype=np.intc)


def mutate(hh: np.ndarray, omega: float, pool, rng: np.random.Generator) -> np.ndarray:
    """Flip each entry with probability ``omega`` to a different pool member.

    Exactly ``2 * len(hh)`` draws are consumed per call, whatever flips.
    """
    pool_codes = np.array([CODE[p] if isinstance(p, str) else int(p) for p in pool], dtype=np.intc)
    h = len(pool_codes)
    if h < 2:
        raise ConfigurationError("mutation needs at least two heuristics")
    lookup = np.full(max(NAME) + 1, -1, dtype=np.intp)
    lookup[pool_codes] = np.arange(h)
    idx = lookup[np.asarray(hh, dtype=np.intc)]
    if np.any(idx < 0):
        raise ConfigurationError("sequence contains a heuristic outside the pool")
    flips = rng.random(len(idx)) < omega
    offsets = rng.integers(1, h, size=len(idx))
    new_idx = np.where(flips, (idx + offsets) % h, idx)
    return pool_codes[new_idx]


def sequence_names(hh) -> list[str]:
    return [NAME[int(c)] for c in hh]


def run_hh(cfg: HHConfig, ctx: TourContext, *, backend=None):
    """(1+1)-style loop: mutate the sequence, repack, keep it when not worse.

    Returns ``(plan, sequence, report)``; the report's ``trajectory`` holds
    the incumbent objective after initialisation and after each iteration.
    """
    t0 = time.perf_counter()
    rng = np.random.default_rng(cfg.seed)
    hh = init_sequence(cfg, ctx, backend=backend)
    plan, z, evals = run_kernel(ctx, hh, spec=cfg.spec, backend=backend)
    init_z = z
    trajectory = [z]
    accepted = 0
    done = 0
    for _ in range(cfg.iterations):
        if cfg.max_evaluations is not None and evals >= cfg.max_evaluations:
            break
        cand = mutate(hh, cfg.mutation_rate, cfg.pool, rng)
        cplan, cz, ce = run_kernel(ctx, cand, spec=cfg.spec, backend=backend)
        evals += ce
        done += 1
        if cz >= z:
            hh, plan, z = cand, cplan, cz
            accepted += 1
        trajectory.append(z)
    ms = (time.perf_counter() - t0) * 1000.0
    report = make_report(
        "Pack_HH", cfg.variant, ctx, plan, z, evals, ms, spec=cfg.spec, seed=cfg.seed,
        iterations=done, mutation_rate=cfg.mutation_rate, init_objective=init_z,
        accepted_moves=accepted, trajectory=trajectory, sequence=sequence_names(hh))
    return plan, hh, report
