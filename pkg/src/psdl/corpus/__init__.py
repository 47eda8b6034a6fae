"""Shipped benchmark scenes: template JSON + program pairs."""
from __future__ import annotations

from importlib import resources
from pathlib import Path

from ..interp import SceneTemplate
from ..lang import Program, parse


def corpus_root() -> Path:
    return Path(resources.files(__package__))  # type: ignore[arg-type]


def scene_names(root: Path | None = None) -> list[str]:
    root = root or corpus_root()
    names = []
    for psdl in sorted(root.glob("*.psdl")):
        if (root / (psdl.stem + ".json")).exists():
            names.append(psdl.stem)
    return names


def load_scene(name: str, root: Path | None = None) -> tuple[SceneTemplate, Program, str]:
    """Template, parsed program, and program source for one scene."""
    root = root or corpus_root()
    template = SceneTemplate.load(root / f"{name}.json")
    source = (root / f"{name}.psdl").read_text(encoding="utf-8")
    return template, parse(source), source
