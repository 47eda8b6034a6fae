"""Cuboid math: frames, AABBs, overlap volumes, direction quantization.

All rotations are quarter turns about the vertical axis, so every frame
transform is exact sign/swap arithmetic (no trig drift). "Clockwise" is
always viewed from above (+z looking down).
"""
from __future__ import annotations

import enum
from dataclasses import dataclass


class Facing(enum.Enum):
    X_NEG = "X_NEG"
    X_POS = "X_POS"
    Y_NEG = "Y_NEG"
    Y_POS = "Y_POS"

    def __repr__(self) -> str:
        return self.name


# Counterclockwise order starting at Y_POS; the frame whose y-axis is
# CCW_FACINGS[k] has rotation k.
CCW_FACINGS = (Facing.Y_POS, Facing.X_NEG, Facing.Y_NEG, Facing.X_POS)
_CCW_INDEX = {f: k for k, f in enumerate(CCW_FACINGS)}

# Tie-break priority for direction quantization.
_QUANTIZE_ORDER = (Facing.X_POS, Facing.Y_POS, Facing.X_NEG, Facing.Y_NEG)

_FACING_VECTORS = {
    Facing.X_POS: (1.0, 0.0),
    Facing.X_NEG: (-1.0, 0.0),
    Facing.Y_POS: (0.0, 1.0),
    Facing.Y_NEG: (0.0, -1.0),
}


@dataclass(frozen=True)
class Vec3:
    x: float
    y: float
    z: float

    def __add__(self, other: "Vec3") -> "Vec3":
        return Vec3(self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other: "Vec3") -> "Vec3":
        return Vec3(self.x - other.x, self.y - other.y, self.z - other.z)

    def component(self, name: str) -> float:
        return getattr(self, name)

    def with_component(self, name: str, value: float) -> "Vec3":
        parts = {"x": self.x, "y": self.y, "z": self.z}
        parts[name] = value
        return Vec3(parts["x"], parts["y"], parts["z"])


@dataclass(frozen=True)
class Frame:
    """A coordinate frame: origin plus an integer quarter-turn rotation.

    rotation k means the frame's y-axis points along CCW_FACINGS[k] in
    world coordinates; the x-axis sits 90 degrees clockwise from y and z
    stays world-up.
    """

    origin: Vec3 = Vec3(0.0, 0.0, 0.0)
    rotation: int = 0

    def __post_init__(self) -> None:
        if self.rotation not in (0, 1, 2, 3):
            raise ValueError(f"frame rotation must be in 0..3, got {self.rotation}")


DEFAULT_FRAME = Frame()


@dataclass(frozen=True)
class Aabb:
    min: Vec3
    max: Vec3

    def volume(self) -> float:
        return (
            (self.max.x - self.min.x)
            * (self.max.y - self.min.y)
            * (self.max.z - self.min.z)
        )


def rotate_xy(x: float, y: float, quarter_turns: int) -> tuple[float, float]:
    """Rotate (x, y) counterclockwise by quarter_turns * 90 degrees. Exact."""
    k = quarter_turns % 4
    if k == 0:
        return x, y
    if k == 1:
        return -y, x
    if k == 2:
        return -x, -y
    return y, -x


def facing_vector(f: Facing) -> tuple[float, float]:
    return _FACING_VECTORS[f]


def frame_rotation_for_facing(f: Facing) -> int:
    """Quarter turns of the frame whose y-axis aligns with facing f."""
    return _CCW_INDEX[f]


def rotate_facing(f: Facing, quarter_turns: int) -> Facing:
    return CCW_FACINGS[(_CCW_INDEX[f] + quarter_turns) % 4]


def to_frame(p: Vec3, f: Frame) -> Vec3:
    """World point -> frame coordinates."""
    x, y = rotate_xy(p.x - f.origin.x, p.y - f.origin.y, -f.rotation)
    return Vec3(x, y, p.z - f.origin.z)


def from_frame(p: Vec3, f: Frame) -> Vec3:
    """Frame coordinates -> world point. Inverse of to_frame."""
    x, y = rotate_xy(p.x, p.y, f.rotation)
    return Vec3(x + f.origin.x, y + f.origin.y, p.z + f.origin.z)


def facing_in_frame(world_facing: Facing, f: Frame) -> Facing:
    return rotate_facing(world_facing, -f.rotation)


def facing_to_world(frame_facing: Facing, f: Frame) -> Facing:
    return rotate_facing(frame_facing, f.rotation)


def aabb_of(obj, frame: Frame = DEFAULT_FRAME) -> Aabb:
    """AABB of a cuboid object expressed in `frame`.

    `obj` needs center (Vec3, world), facing (Facing, world) and
    width/depth/height. Width is the extent perpendicular to facing,
    depth the extent along it, height vertical.
    """
    c = to_frame(obj.center, frame)
    local_facing = facing_in_frame(obj.facing, frame)
    if local_facing in (Facing.Y_POS, Facing.Y_NEG):
        ex, ey = obj.width, obj.depth
    else:
        ex, ey = obj.depth, obj.width
    hx, hy, hz = ex / 2.0, ey / 2.0, obj.height / 2.0
    return Aabb(
        Vec3(c.x - hx, c.y - hy, c.z - hz),
        Vec3(c.x + hx, c.y + hy, c.z + hz),
    )


def intersection_volume(a: Aabb, b: Aabb) -> float:
    """Volume of a AND b; zero when disjoint or merely touching."""
    dx = min(a.max.x, b.max.x) - max(a.min.x, b.min.x)
    if dx <= 0.0:
        return 0.0
    dy = min(a.max.y, b.max.y) - max(a.min.y, b.min.y)
    if dy <= 0.0:
        return 0.0
    dz = min(a.max.z, b.max.z) - max(a.min.z, b.min.z)
    if dz <= 0.0:
        return 0.0
    return dx * dy * dz


def footprint_overlap_area(a: Aabb, b: Aabb) -> float:
    """Area of the xy-projection intersection of two boxes."""
    dx = min(a.max.x, b.max.x) - max(a.min.x, b.min.x)
    if dx <= 0.0:
        return 0.0
    dy = min(a.max.y, b.max.y) - max(a.min.y, b.min.y)
    if dy <= 0.0:
        return 0.0
    return dx * dy


def quantize_direction(dx: float, dy: float, fallback: Facing | None = None) -> Facing:
    """Nearest cardinal to (dx, dy) by dot product.

    Ties break X_POS > Y_POS > X_NEG > Y_NEG. The zero vector has no
    direction; it returns `fallback` (callers pass the object's current
    facing) or raises when no fallback is given.
    """
    if dx == 0.0 and dy == 0.0:
        if fallback is None:
            raise ValueError("cannot quantize the zero vector without a fallback")
        return fallback
    best = None
    best_dot = float("-inf")
    for f in _QUANTIZE_ORDER:
        vx, vy = _FACING_VECTORS[f]
        dot = dx * vx + dy * vy
        if dot > best_dot:
            best = f
            best_dot = dot
    assert best is not None
    return best
