"""Corrupt-then-repair benchmark over a scene corpus.

For every (scene, seed, strategy) cell: corrupt the clean program at k
random edit sites, repair with the strategy, and record error counts and
objective values before and after. Row content is deterministic given
seeds; wall times are kept in a separate section so the content part of
the report is reproducible byte for byte.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass
from pathlib import Path

from .corrupt import inject_errors
from .errors import PsdlError
from .interp import SceneTemplate, execute
from .lang import Program
from .loss import total_loss
from .repair import STRATEGIES, RepairResult, SearchConfig, repair

DEFAULT_ERRORS_PER_SCENE = 6


@dataclass(frozen=True)
class BenchRow:
    scene: str
    seed: int
    strategy: str
    errors_before: int
    errors_after: int
    f_before: float
    f_after: float
    accepted_edits: int
    candidates_evaluated: int
    wall_time_s: float

    def content_json(self) -> dict:
        return {
            "scene": self.scene,
            "seed": self.seed,
            "strategy": self.strategy,
            "errors_before": self.errors_before,
            "errors_after": self.errors_after,
            "f_before": self.f_before,
            "f_after": self.f_after,
            "accepted_edits": self.accepted_edits,
            "candidates_evaluated": self.candidates_evaluated,
        }

    @property
    def key(self) -> str:
        return f"{self.scene}/{self.seed}/{self.strategy}"


@dataclass
class BenchReport:
    rows: list[BenchRow]
    errors_per_scene: int

    def aggregates(self) -> dict[str, dict[str, float]]:
        agg: dict[str, dict[str, float]] = {}
        for strategy in sorted({r.strategy for r in self.rows}, key=STRATEGIES.index):
            rows = [r for r in self.rows if r.strategy == strategy]
            n = float(len(rows))
            agg[strategy] = {
                "scenes": n,
                "mean_errors_before": sum(r.errors_before for r in rows) / n,
                "mean_errors_after": sum(r.errors_after for r in rows) / n,
                "mean_f_before": sum(r.f_before for r in rows) / n,
                "mean_f_after": sum(r.f_after for r in rows) / n,
                "mean_accepted_edits": sum(r.accepted_edits for r in rows) / n,
                "mean_candidates": sum(r.candidates_evaluated for r in rows) / n,
                "mean_wall_time_s": sum(r.wall_time_s for r in rows) / n,
            }
        return agg

    def to_json(self) -> dict:
        return {
            "errors_per_scene": self.errors_per_scene,
            "rows": [r.content_json() for r in self.rows],
            "timings": {r.key: r.wall_time_s for r in self.rows},
            "aggregates": self.aggregates(),
        }


def corrupt_scene(program: Program, template: SceneTemplate, seed: int, k: int) -> Program:
    """Seeded corruption; the rng namespace is (scene seed) only."""
    rng = random.Random(seed)
    return inject_errors(program, rng, k)


def run_cell(
    scene: str,
    template: SceneTemplate,
    corrupted: Program,
    strategy: str,
    seed: int,
    cfg: SearchConfig,
) -> tuple[BenchRow, RepairResult]:
    result = repair(corrupted, template, strategy, cfg)
    row = BenchRow(
        scene=scene,
        seed=seed,
        strategy=strategy,
        errors_before=result.report_before.error_count,
        errors_after=result.report_after.error_count,
        f_before=result.report_before.total,
        f_after=result.report_after.total,
        accepted_edits=result.accepted_edits,
        candidates_evaluated=result.candidates_evaluated,
        wall_time_s=result.wall_time_s,
    )
    return row, result


def run_bench(
    corpus_dir: Path,
    strategies: list[str],
    seeds: list[int],
    errors_per_scene: int = DEFAULT_ERRORS_PER_SCENE,
) -> BenchReport:
    for s in strategies:
        if s not in STRATEGIES:
            raise ValueError(f"unknown strategy {s!r}")
    rows: list[BenchRow] = []
    scenes = _load_corpus(corpus_dir)
    for name, template, program in scenes:
        base_layout = execute(program, template)
        base_errors = total_loss(base_layout).error_count
        if base_errors:
            raise PsdlError(f"corpus scene {name!r} is not clean ({base_errors} errors)")
        for seed in seeds:
            corrupted = corrupt_scene(program, template, seed, errors_per_scene)
            for strategy in strategies:
                row, _ = run_cell(name, template, corrupted, strategy, seed, SearchConfig(seed=seed))
                rows.append(row)
    return BenchReport(rows, errors_per_scene)


def _load_corpus(corpus_dir: Path) -> list[tuple[str, SceneTemplate, Program]]:
    from .corpus import load_scene, scene_names

    names = scene_names(Path(corpus_dir))
    if not names:
        raise PsdlError(f"no (.json, .psdl) scene pairs under {corpus_dir}")
    scenes = []
    for name in names:
        template, program, _ = load_scene(name, Path(corpus_dir))
        scenes.append((name, template, program))
    return scenes


def format_table(report: BenchReport) -> str:
    """Aligned text table: per-row results plus per-strategy means."""
    headers = ["scene", "seed", "strategy", "err before", "err after",
               "f before", "f after", "edits", "cands", "time (s)"]
    body = [
        [r.scene, str(r.seed), r.strategy, str(r.errors_before), str(r.errors_after),
         f"{r.f_before:.3f}", f"{r.f_after:.3f}", str(r.accepted_edits),
         str(r.candidates_evaluated), f"{r.wall_time_s:.2f}"]
        for r in report.rows
    ]
    agg_rows = []
    for strategy, a in report.aggregates().items():
        agg_rows.append(
            ["MEAN", "-", strategy, f"{a['mean_errors_before']:.1f}", f"{a['mean_errors_after']:.1f}",
             f"{a['mean_f_before']:.3f}", f"{a['mean_f_after']:.3f}",
             f"{a['mean_accepted_edits']:.1f}", f"{a['mean_candidates']:.0f}",
             f"{a['mean_wall_time_s']:.2f}"]
        )
    table = [headers] + body + agg_rows
    widths = [max(len(row[i]) for row in table) for i in range(len(headers))]
    lines = []
    for k, row in enumerate(table):
        lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip())
        if k == 0 or k == len(table) - len(agg_rows) - 1:
            lines.append("  ".join("-" * widths[i] for i in range(len(widths))))
    return "\n".join(lines) + "\n"


def save_report(report: BenchReport, out_json: Path) -> None:
    with open(out_json, "w", encoding="utf-8") as fh:
        json.dump(report.to_json(), fh, indent=2)
        fh.write("\n")
