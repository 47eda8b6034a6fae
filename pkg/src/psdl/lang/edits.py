"""Edit-site extraction and literal rewriting.

The search layer mutates programs only through these two operations:
every candidate program is apply_edit(p, site, value) for some site
reported by edit_sites(p), so repairs can never change program
structure.
"""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import Union

from ..errors import StalePathError
from ..geometry import Facing
from .nodes import DirectionLit, NodePath, NumberLit, Program, iter_nodes, replace_at, resolve

CONSTANT = "CONSTANT"
DIRECTION = "DIRECTION"


@dataclass(frozen=True)
class EditSite:
    path: NodePath
    kind: str                      # CONSTANT or DIRECTION
    value: Union[float, Facing]


def edit_sites(program: Program) -> list[EditSite]:
    """All rewritable literals in source order.

    CONSTANT sites are editable numeric literals; DIRECTION sites are
    cardinal-direction literals.
    """
    sites: list[EditSite] = []
    for path, node in iter_nodes(program):
        if isinstance(node, NumberLit) and node.editable:
            sites.append(EditSite(path, CONSTANT, node.value))
        elif isinstance(node, DirectionLit):
            sites.append(EditSite(path, DIRECTION, node.facing))
    return sites


def apply_edit(program: Program, site: EditSite, new_value: Union[float, Facing]) -> Program:
    """New Program with the literal at `site` replaced; `program` is unchanged."""
    node = resolve(program, site.path)
    if site.kind == CONSTANT:
        if not isinstance(node, NumberLit) or not node.editable:
            raise StalePathError(f"no editable constant at {site.path}")
        value = float(new_value)
        if not math.isfinite(value):
            raise ValueError(f"constant replacement must be finite, got {new_value!r}")
        return replace_at(program, site.path, dataclasses.replace(node, value=value))
    if site.kind == DIRECTION:
        if not isinstance(node, DirectionLit):
            raise StalePathError(f"no direction literal at {site.path}")
        if not isinstance(new_value, Facing):
            raise ValueError(f"direction replacement must be a Facing, got {new_value!r}")
        return replace_at(program, site.path, dataclasses.replace(node, facing=new_value))
    raise ValueError(f"unknown edit kind {site.kind!r}")
