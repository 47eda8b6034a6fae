"""Error correction by iterated local search over program edits.

The search never touches program structure: candidates are single
rewrites of numeric constants (multiplied by a random +/-4^Y factor) or
direction literals (all four cardinals). Each iteration greedily accepts
the candidate with the lowest objective

    f = loss(layout) + ot_distance(layout, original_layout)

and stops when no candidate improves f beyond a small threshold.

Two object-level baselines live here too: repair of the structure-erased
flat program, and direct gradient descent on object centers.
"""
from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .errors import InvalidSeedProgramError, PsdlError, PsdlRuntimeError
from .geometry import Facing, Vec3
from .interp import Layout, SceneTemplate, binding_identifiers, execute
from .lang import (
    CONSTANT,
    AttrAssign,
    DirectionLit,
    EditSite,
    FacingAssign,
    NumberLit,
    Program,
    VarRef,
    apply_edit,
    edit_sites,
)
from .loss import LossReport, total_loss
from .transport import ot_distance

STRATEGIES = ("none", "gd", "flat", "psdl")

# Step used to escape a constant that is exactly zero, where the
# multiplicative scheme is a fixed point (meters).
ZERO_ESCAPE = 0.1

_CARDINALS = (Facing.X_NEG, Facing.X_POS, Facing.Y_NEG, Facing.Y_POS)


@dataclass(frozen=True)
class SearchConfig:
    seed: int = 0
    samples_per_constant: int = 10
    directions_per_site: int = 4
    improvement_threshold: float = 1e-3
    max_iterations: int = 200

    def __post_init__(self) -> None:
        if self.samples_per_constant < 1:
            raise ValueError("samples_per_constant must be >= 1")
        if self.directions_per_site != 4:
            raise ValueError("direction sites always try all 4 cardinals")
        if self.improvement_threshold <= 0:
            raise ValueError("improvement_threshold must be positive")


@dataclass(frozen=True)
class Edit:
    site: EditSite
    new_value: Union[float, Facing]

    def to_json(self) -> dict:
        new = self.new_value.name if isinstance(self.new_value, Facing) else self.new_value
        old = self.site.value.name if isinstance(self.site.value, Facing) else self.site.value
        return {"path": list(self.site.path), "kind": self.site.kind, "old": old, "new": new}


@dataclass(frozen=True)
class SearchIteration:
    edit: Optional[Edit]       # None on the final, rejecting iteration
    objective: float
    candidates: int

    def to_json(self) -> dict:
        return {
            "edit": self.edit.to_json() if self.edit else None,
            "objective": self.objective,
            "candidates": self.candidates,
        }


@dataclass
class SearchTrace:
    iterations: list[SearchIteration] = field(default_factory=list)
    accepted_edit_count: int = 0
    initial_objective: float = 0.0
    final_objective: float = 0.0
    initial_report: Optional[LossReport] = None
    final_report: Optional[LossReport] = None
    wall_time_s: float = 0.0

    def candidates_evaluated(self) -> int:
        return sum(it.candidates for it in self.iterations)

    def to_json(self) -> dict:
        # Wall time is deliberately absent: trace files must be
        # byte-identical across runs with the same seed.
        return {
            "iterations": [it.to_json() for it in self.iterations],
            "accepted_edit_count": self.accepted_edit_count,
            "initial_objective": self.initial_objective,
            "final_objective": self.final_objective,
            "initial_report": self.initial_report.to_json() if self.initial_report else None,
            "final_report": self.final_report.to_json() if self.final_report else None,
        }


def sample_neighborhood(program: Program, rng: random.Random, cfg: SearchConfig) -> list[Edit]:
    """The finite edit set tried in one iteration.

    Per constant site, samples_per_constant rewrites c' = c * s * 4^Y
    with s uniform on {-1, +1} and Y uniform on [-1, 1]; per direction
    site, all four cardinals. Order is fixed (site order, then sample
    index) and all randomness is drawn up front, so a seeded rng yields
    an identical list every time.
    """
    edits: list[Edit] = []
    for site in edit_sites(program):
        if site.kind == CONSTANT:
            for _ in range(cfg.samples_per_constant):
                s = 1.0 if rng.random() < 0.5 else -1.0
                factor = s * 4.0 ** rng.uniform(-1.0, 1.0)
                base = site.value
                new = base * factor if base != 0.0 else ZERO_ESCAPE * factor
                edits.append(Edit(site, new))
        else:
            for f in _CARDINALS:
                edits.append(Edit(site, f))
    return edits


def objective(layout: Layout, anchor: Layout) -> float:
    return total_loss(layout).total + ot_distance(layout, anchor)


def local_search(
    p0: Program, template: SceneTemplate, cfg: SearchConfig = SearchConfig()
) -> tuple[Program, SearchTrace]:
    """Greedy best-single-edit descent from p0.

    Accepts the best candidate of each resampled neighborhood while it
    improves the objective by more than the threshold; otherwise stops.
    Candidates that fail to execute are discarded. Deterministic for a
    fixed (p0, template, cfg).
    """
    started = time.perf_counter()
    try:
        anchor = execute(p0, template)
    except PsdlError as err:
        raise InvalidSeedProgramError(f"seed program does not execute: {err}") from err
    initial_report = total_loss(anchor)
    f_cur = initial_report.total  # + ot_distance(anchor, anchor) == 0

    rng = random.Random(cfg.seed)
    trace = SearchTrace(initial_objective=f_cur, initial_report=initial_report)
    p_cur = p0
    layout_cur = anchor

    for _ in range(cfg.max_iterations):
        edits = sample_neighborhood(p_cur, rng, cfg)
        best_f = math.inf
        best: Optional[tuple[Edit, Program, Layout]] = None
        for edit in edits:
            candidate = apply_edit(p_cur, edit.site, edit.new_value)
            try:
                layout = execute(candidate, template)
            except PsdlRuntimeError:
                continue
            f = objective(layout, anchor)
            if f < best_f:
                best_f = f
                best = (edit, candidate, layout)
        if best is not None and best_f < f_cur - cfg.improvement_threshold:
            edit, p_cur, layout_cur = best
            f_cur = best_f
            trace.iterations.append(SearchIteration(edit, f_cur, len(edits)))
            trace.accepted_edit_count += 1
        else:
            trace.iterations.append(SearchIteration(None, f_cur, len(edits)))
            break

    trace.final_objective = f_cur
    trace.final_report = total_loss(layout_cur)
    trace.wall_time_s = time.perf_counter() - started
    return p_cur, trace


def lower_to_flat(program: Program, template: SceneTemplate) -> Program:
    """Erase all structure: literal center/facing assignments per object.

    Executing the result reproduces execute(program, template) exactly;
    loops, shared variables and object relations are gone, so every
    placement becomes an independent edit site (3 constants plus one
    direction per object).
    """
    layout = execute(program, template)
    idents = binding_identifiers(template)
    stmts = []
    for ident, obj in zip(idents, layout.objects):
        for comp in ("x", "y", "z"):
            stmts.append(AttrAssign(
                VarRef(ident), "center", comp, NumberLit(obj.center.component(comp))))
        stmts.append(FacingAssign(VarRef(ident), DirectionLit(obj.facing)))
    return Program(tuple(stmts))


# --- gradient-descent baseline --------------------------------------------

FD_STEP = 1e-3
GD_INITIAL_STEP = 0.1
GD_ARMIJO_C = 1e-4
GD_GRAD_TOL = 1e-4
GD_MAX_ITERATIONS = 500


@dataclass
class GdTrace:
    objectives: list[float] = field(default_factory=list)
    iterations: int = 0
    final_grad_norm: float = math.inf
    wall_time_s: float = 0.0

    def to_json(self) -> dict:
        return {
            "objectives": self.objectives,
            "iterations": self.iterations,
            "final_grad_norm": self.final_grad_norm,
        }


def _set_centers(layout: Layout, x: np.ndarray) -> None:
    for i, obj in enumerate(layout.objects):
        obj.center = Vec3(float(x[3 * i]), float(x[3 * i + 1]), float(x[3 * i + 2]))


def _get_centers(layout: Layout) -> np.ndarray:
    return np.array([c for o in layout.objects for c in (o.center.x, o.center.y, o.center.z)])


def finite_difference_gradient(fun, x: np.ndarray, h: float = FD_STEP) -> np.ndarray:
    """Central finite differences, coordinate by coordinate."""
    g = np.zeros_like(x)
    for i in range(len(x)):
        xp = x.copy()
        xm = x.copy()
        xp[i] += h
        xm[i] -= h
        g[i] = (fun(xp) - fun(xm)) / (2.0 * h)
    return g


def gradient_descent_repair(
    p0: Program, template: SceneTemplate, cfg: SearchConfig = SearchConfig()
) -> tuple[Layout, GdTrace]:
    """Minimize f over all object centers directly; facings stay fixed.

    Finite-difference gradients with backtracking (Armijo) line search.
    Edits objects, not the program, so there is no repaired program.
    """
    started = time.perf_counter()
    try:
        anchor = execute(p0, template)
    except PsdlError as err:
        raise InvalidSeedProgramError(f"seed program does not execute: {err}") from err
    work = Layout.from_json(anchor.to_json())

    def fun(x: np.ndarray) -> float:
        _set_centers(work, x)
        return objective(work, anchor)

    x = _get_centers(anchor)
    trace = GdTrace()
    fx = fun(x)
    trace.objectives.append(fx)
    for _ in range(GD_MAX_ITERATIONS):
        g = finite_difference_gradient(fun, x)
        gnorm = float(np.abs(g).max()) if len(g) else 0.0
        trace.final_grad_norm = gnorm
        if gnorm < GD_GRAD_TOL:
            break
        step = GD_INITIAL_STEP
        g2 = float((g * g).sum())
        while step > 1e-12:
            xn = x - step * g
            fn = fun(xn)
            if fn <= fx - GD_ARMIJO_C * step * g2:
                break
            step /= 2.0
        else:
            break
        if fn >= fx:
            break
        x, fx = xn, fn
        trace.objectives.append(fx)
        trace.iterations += 1

    _set_centers(work, x)
    trace.wall_time_s = time.perf_counter() - started
    return work, trace


# --- strategy dispatch ------------------------------------------------------

@dataclass
class RepairResult:
    strategy: str
    program: Optional[Program]     # repaired program; None for gd and none
    layout: Layout
    report_before: LossReport
    report_after: LossReport
    trace: Optional[object]        # SearchTrace, GdTrace, or None
    wall_time_s: float

    @property
    def accepted_edits(self) -> int:
        return self.trace.accepted_edit_count if isinstance(self.trace, SearchTrace) else 0

    @property
    def candidates_evaluated(self) -> int:
        return self.trace.candidates_evaluated() if isinstance(self.trace, SearchTrace) else 0


def repair(
    p0: Program,
    template: SceneTemplate,
    strategy: str = "psdl",
    cfg: SearchConfig = SearchConfig(),
) -> RepairResult:
    """Run one repair strategy end to end.

    none: report losses, change nothing. gd: gradient descent on object
    centers. flat: local search on the structure-erased program. psdl:
    local search on the program as written.
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}; expected one of {STRATEGIES}")
    try:
        before_layout = execute(p0, template)
    except PsdlError as err:
        raise InvalidSeedProgramError(f"seed program does not execute: {err}") from err
    report_before = total_loss(before_layout)

    if strategy == "none":
        return RepairResult("none", p0, before_layout, report_before, report_before, None, 0.0)

    if strategy == "gd":
        layout, trace = gradient_descent_repair(p0, template, cfg)
        return RepairResult(
            "gd", None, layout, report_before, total_loss(layout), trace, trace.wall_time_s)

    started = time.perf_counter()
    seed_program = lower_to_flat(p0, template) if strategy == "flat" else p0
    repaired, trace = local_search(seed_program, template, cfg)
    layout = execute(repaired, template)
    wall = time.perf_counter() - started
    return RepairResult(strategy, repaired, layout, report_before, trace.final_report, trace, wall)
