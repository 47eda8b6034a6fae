"""Layout validity losses: bounds, overlap, standing and mounted support.

Each term is a sum of per-object or per-pair violation magnitudes in
meters; a layout with no violations scores zero on every term. Items
above the counting threshold are "errors" in reports and benchmarks.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from . import geometry
from .geometry import Aabb
from .interp import Layout, ObjectState, Support

# Items above this magnitude (meters) count as errors.
EPS_ERROR = 0.01
# Interpenetration up to this depth between a stander and its support is
# numerical contact, not overlap.
EPS_CONTACT = 1e-4

_cbrt = getattr(math, "cbrt", lambda v: v ** (1.0 / 3.0))


@dataclass(frozen=True)
class LossItem:
    kind: str                  # out_of_bounds | overlap | standing | mounted
    objects: tuple[str, ...]   # one object id, or the pair for overlaps
    amount: float

    def to_json(self) -> dict:
        return {"kind": self.kind, "objects": list(self.objects), "amount": self.amount}


@dataclass(frozen=True)
class LossTerm:
    total: float
    items: tuple[LossItem, ...]

    def to_json(self) -> dict:
        return {"total": self.total, "items": [i.to_json() for i in self.items]}


@dataclass(frozen=True)
class LossReport:
    out_of_bounds: LossTerm
    overlap: LossTerm
    standing: LossTerm
    mounted: LossTerm
    total: float
    error_count: int

    def to_json(self) -> dict:
        return {
            "out_of_bounds": self.out_of_bounds.to_json(),
            "overlap": self.overlap.to_json(),
            "standing": self.standing.to_json(),
            "mounted": self.mounted.to_json(),
            "total": self.total,
            "error_count": self.error_count,
        }

    def violating_ids(self) -> set[str]:
        ids: set[str] = set()
        for term in (self.out_of_bounds, self.overlap, self.standing, self.mounted):
            for item in term.items:
                if item.amount > EPS_ERROR:
                    ids.update(item.objects)
        return ids


def collision_box(obj: ObjectState, box: Aabb | None = None) -> Aabb:
    """World AABB, expanded in front of doors and windows.

    Anything whose name contains "door" or "window" needs clearance to
    open, so its box grows along the facing direction by the object's
    width.
    """
    box = box if box is not None else obj.world_aabb()
    name = obj.name.lower()
    if "door" not in name and "window" not in name:
        return box
    dx, dy = geometry.facing_vector(obj.facing)
    w = obj.width
    lo, hi = box.min, box.max
    if dx > 0:
        hi = hi.with_component("x", hi.x + w)
    elif dx < 0:
        lo = lo.with_component("x", lo.x - w)
    elif dy > 0:
        hi = hi.with_component("y", hi.y + w)
    else:
        lo = lo.with_component("y", lo.y - w)
    return Aabb(lo, hi)


def out_of_bounds_loss(layout: Layout, boxes: list[Aabb] | None = None) -> LossTerm:
    """Per object, the deepest protrusion of its AABB beyond the scene."""
    scene = layout.scene_box()
    boxes = boxes if boxes is not None else [o.world_aabb() for o in layout.objects]
    items = []
    total = 0.0
    for obj, box in zip(layout.objects, boxes):
        depth = max(
            scene.min.x - box.min.x, box.max.x - scene.max.x,
            scene.min.y - box.min.y, box.max.y - scene.max.y,
            scene.min.z - box.min.z, box.max.z - scene.max.z,
            0.0,
        )
        if depth > 0.0:
            items.append(LossItem("out_of_bounds", (obj.id,), depth))
            total += depth
    return LossTerm(total, tuple(items))


def _footprint_area(box: Aabb) -> float:
    return (box.max.x - box.min.x) * (box.max.y - box.min.y)


def _stands_on(upper: ObjectState, ubox: Aabb, lower_box: Aabb) -> bool:
    if upper.support is not Support.STANDING:
        return False
    if abs(ubox.min.z - lower_box.max.z) > EPS_CONTACT:
        return False
    area = _footprint_area(ubox)
    return area > 0.0 and geometry.footprint_overlap_area(ubox, lower_box) >= 0.5 * area


def overlap_loss(layout: Layout, raw_boxes: list[Aabb] | None = None) -> LossTerm:
    """Per unordered pair, the cube root of the collision-box intersection.

    Contact between a standing object and the surface it rests on is
    forgiven up to EPS_CONTACT of interpenetration.
    """
    objs = layout.objects
    raw = raw_boxes if raw_boxes is not None else [o.world_aabb() for o in objs]
    boxes = [collision_box(o, box) for o, box in zip(objs, raw)]
    bounds = [(b.min.x, b.min.y, b.min.z, b.max.x, b.max.y, b.max.z) for b in boxes]
    items = []
    total = 0.0
    for i in range(len(objs)):
        a0, a1, a2, a3, a4, a5 = bounds[i]
        for j in range(i + 1, len(objs)):
            b0, b1, b2, b3, b4, b5 = bounds[j]
            dx = (a3 if a3 < b3 else b3) - (a0 if a0 > b0 else b0)
            if dx <= 0.0:
                continue
            dy = (a4 if a4 < b4 else b4) - (a1 if a1 > b1 else b1)
            if dy <= 0.0:
                continue
            dz = (a5 if a5 < b5 else b5) - (a2 if a2 > b2 else b2)
            if dz <= 0.0:
                continue
            if _stands_on(objs[i], raw[i], raw[j]) or _stands_on(objs[j], raw[j], raw[i]):
                dz = dz - EPS_CONTACT
                if dz <= 0.0:
                    continue
            amount = _cbrt(dx * dy * dz)
            items.append(LossItem("overlap", (objs[i].id, objs[j].id), amount))
            total += amount
    return LossTerm(total, tuple(items))


def standing_loss(layout: Layout, boxes: list[Aabb] | None = None) -> LossTerm:
    """Distance from each standing object's bottom to a supporting surface.

    Candidate surfaces are the scene floor and the top face of any other
    object covering at least half the object's footprint.
    """
    objs = layout.objects
    boxes = boxes if boxes is not None else [o.world_aabb() for o in objs]
    items = []
    total = 0.0
    for i, obj in enumerate(objs):
        if obj.support is not Support.STANDING:
            continue
        box = boxes[i]
        area = _footprint_area(box)
        best = abs(box.min.z - 0.0)  # the scene floor always supports
        for j in range(len(objs)):
            if j == i:
                continue
            if geometry.footprint_overlap_area(box, boxes[j]) >= 0.5 * area:
                best = min(best, abs(box.min.z - boxes[j].max.z))
        if best > 0.0:
            items.append(LossItem("standing", (obj.id,), best))
            total += best
    return LossTerm(total, tuple(items))


def _axis_ranges(box: Aabb, axis: str) -> tuple[float, float]:
    return box.min.component(axis), box.max.component(axis)


def mounted_loss(layout: Layout, boxes: list[Aabb] | None = None) -> LossTerm:
    """Distance from each wall-mounted object's back face to a vertical surface.

    Candidates are the two scene walls perpendicular to the facing axis
    and the parallel faces of other objects, kept only when their
    projection overlaps the back face's projection. If nothing overlaps
    (the object is far outside the scene) the nearest parallel wall
    plane stands in so the loss stays finite.
    """
    objs = layout.objects
    boxes = boxes if boxes is not None else [o.world_aabb() for o in objs]
    scene = layout.scene_box()
    items = []
    total = 0.0
    for i, obj in enumerate(objs):
        if obj.support is not Support.WALL_MOUNTED:
            continue
        box = boxes[i]
        dx, dy = geometry.facing_vector(obj.facing)
        axis = "x" if dx != 0.0 else "y"
        lat = "y" if axis == "x" else "x"
        forward = dx if axis == "x" else dy
        lo, hi = _axis_ranges(box, axis)
        back = lo if forward > 0 else hi
        back_lat = _axis_ranges(box, lat)
        back_z = (box.min.z, box.max.z)

        wall_planes = _axis_ranges(scene, axis)
        candidates = []
        scene_lat = _axis_ranges(scene, lat)
        scene_z = (scene.min.z, scene.max.z)
        for plane in wall_planes:
            if _overlaps(back_lat, scene_lat) and _overlaps(back_z, scene_z):
                candidates.append(plane)
        for j in range(len(objs)):
            if j == i:
                continue
            obox = boxes[j]
            if _overlaps(back_lat, _axis_ranges(obox, lat)) and _overlaps(back_z, (obox.min.z, obox.max.z)):
                candidates.extend(_axis_ranges(obox, axis))
        if candidates:
            dist = min(abs(back - plane) for plane in candidates)
        else:
            dist = min(abs(back - plane) for plane in wall_planes)
        if dist > 0.0:
            items.append(LossItem("mounted", (obj.id,), dist))
            total += dist
    return LossTerm(total, tuple(items))


def _overlaps(a: tuple[float, float], b: tuple[float, float]) -> bool:
    return min(a[1], b[1]) - max(a[0], b[0]) > 0.0


def total_loss(layout: Layout) -> LossReport:
    boxes = [o.world_aabb() for o in layout.objects]
    oob = out_of_bounds_loss(layout, boxes)
    ovl = overlap_loss(layout, boxes)
    sta = standing_loss(layout, boxes)
    mnt = mounted_loss(layout, boxes)
    terms = (oob, ovl, sta, mnt)
    total = sum(t.total for t in terms)
    errors = sum(1 for t in terms for item in t.items if item.amount > EPS_ERROR)
    return LossReport(oob, ovl, sta, mnt, total, errors)
