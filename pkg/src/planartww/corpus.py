"""The fixed benchmark corpus and a per-instance runner."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable

from .embedding import RotationSystem
from .engine import StepHook, synthesize_planar_detailed
from .generators import gen_cycle, gen_grid, gen_random_planar, gen_stacked_triangulation, gen_wheel
from .trigraph import ContractionSequence
from .verifier import replay

FAMILIES: dict[str, Callable[..., RotationSystem]] = {
    "stacked": gen_stacked_triangulation,
    "grid": gen_grid,
    "wheel": gen_wheel,
    "cycle": gen_cycle,
    "random-planar": gen_random_planar,
}


@dataclass(frozen=True)
class Instance:
    name: str
    family: str
    params: tuple

    def build(self) -> RotationSystem:
        return FAMILIES[self.family](*self.params)

    @property
    def n(self) -> int:
        if self.family == "grid":
            return self.params[0] * self.params[1]
        return self.params[0]


def default_corpus() -> list[Instance]:
    """218 instances with fixed parameters and seeds."""
    out: list[Instance] = []
    stacked = [4, 5, 6, 7, 8, 10, 12, 15, 20, 25, 30, 40, 50, 60, 80, 100, 120, 150, 200, 250, 300, 400, 500]
    for i, n in enumerate(stacked + stacked[:17]):
        seed = 1000 + i
        out.append(Instance(f"stacked-{n}-s{seed}", "stacked", (n, seed)))
    grids = [(1, 2), (1, 5), (2, 2), (2, 3), (3, 3), (2, 7), (3, 5), (4, 4), (5, 5), (3, 12), (6, 6), (7, 5), (8, 8),
             (10, 10), (4, 25), (12, 12), (14, 14), (15, 13), (16, 16), (18, 18), (20, 20), (20, 10), (9, 11), (1, 20)]
    for w, h in grids:
        out.append(Instance(f"grid-{w}x{h}", "grid", (w, h)))
    for n in list(range(4, 20)) + [22, 25, 30, 40, 50, 64, 80, 100, 150, 200]:
        out.append(Instance(f"wheel-{n}", "wheel", (n,)))
    for n in list(range(3, 20)) + [25, 30, 40, 50, 64, 80, 100, 150, 200]:
        out.append(Instance(f"cycle-{n}", "cycle", (n,)))
    sizes = [4, 5, 6, 7, 8, 8, 10, 12, 15, 20, 25, 30, 40, 50, 60, 80, 100, 120, 150, 200, 300, 400]
    for p in (0.2, 0.5, 0.8):
        for i, n in enumerate(sizes + sizes[:12]):
            seed = 5000 + int(p * 100) * 100 + i
            out.append(Instance(f"random-{n}-p{p}-s{seed}", "random-planar", (n, p, seed)))
    return out


@dataclass
class RunRecord:
    name: str
    n: int
    width: int
    gplus_vertices: int
    branches: dict = field(default_factory=dict)
    cuts: int = 0
    seconds: float = 0.0
    checked: bool = False
    sequence: ContractionSequence | None = field(default=None, repr=False)

    @property
    def ok(self) -> bool:
        return self.width <= 11


def run_instance(inst: Instance, *, check: bool = False, on_step: StepHook | None = None) -> RunRecord:
    """Synthesize for one instance and replay the result independently."""
    rs = inst.build()
    t0 = time.perf_counter()
    res = synthesize_planar_detailed(rs, check=check, on_step=on_step)
    n = len(rs.rotation)
    width = replay(n, rs.edges(), res.sequence).width
    return RunRecord(
        inst.name,
        n,
        width,
        len(res.gplus.rotation) if res.gplus else n,
        dict(res.branches),
        res.cuts_checked,
        time.perf_counter() - t0,
        check,
        res.sequence,
    )
