import math
import random
from dataclasses import dataclass

import pytest

from psdl.geometry import (
    Aabb,
    DEFAULT_FRAME,
    Facing,
    Frame,
    Vec3,
    aabb_of,
    facing_in_frame,
    facing_to_world,
    footprint_overlap_area,
    frame_rotation_for_facing,
    from_frame,
    intersection_volume,
    quantize_direction,
    rotate_facing,
    rotate_xy,
    to_frame,
)


@dataclass
class Box:
    center: Vec3
    facing: Facing
    width: float
    depth: float
    height: float


def rot_matrix(quarter_turns):
    a = math.pi / 2 * quarter_turns
    return ((math.cos(a), -math.sin(a)), (math.sin(a), math.cos(a)))


def apply_matrix(m, x, y):
    return (m[0][0] * x + m[0][1] * y, m[1][0] * x + m[1][1] * y)


# --- aabb_of ---------------------------------------------------------------

def test_unit_cuboid_identity_frame():
    obj = Box(Vec3(0, 0, 0.5), Facing.Y_POS, 1.0, 1.0, 1.0)
    box = aabb_of(obj, DEFAULT_FRAME)
    assert box.min == Vec3(-0.5, -0.5, 0.0)
    assert box.max == Vec3(0.5, 0.5, 1.0)


def test_width_is_perpendicular_to_facing():
    obj = Box(Vec3(0, 0, 0.5), Facing.X_POS, 2.0, 1.0, 1.0)
    box = aabb_of(obj, DEFAULT_FRAME)
    assert box.max.x - box.min.x == pytest.approx(1.0)  # depth along facing
    assert box.max.y - box.min.y == pytest.approx(2.0)  # width perpendicular


def test_aabb_under_rotated_frame_matches_matrix_oracle():
    # Composing an explicit 90-degree rotation with the identity-frame box
    # must agree with evaluating the box directly in the rotated frame.
    rng = random.Random(7)
    for _ in range(200):
        obj = Box(
            Vec3(rng.uniform(-4, 4), rng.uniform(-4, 4), rng.uniform(0, 2)),
            rng.choice(list(Facing)),
            rng.uniform(0.2, 2), rng.uniform(0.2, 2), rng.uniform(0.2, 2),
        )
        k = rng.randrange(4)
        frame = Frame(Vec3(0, 0, 0), k)
        box = aabb_of(obj, frame)

        m = rot_matrix(-k)
        cx, cy = apply_matrix(m, obj.center.x, obj.center.y)
        local_facing = rotate_facing(obj.facing, -k)
        if local_facing in (Facing.Y_POS, Facing.Y_NEG):
            ex, ey = obj.width, obj.depth
        else:
            ex, ey = obj.depth, obj.width
        assert box.min.x == pytest.approx(cx - ex / 2, abs=1e-12)
        assert box.max.y == pytest.approx(cy + ey / 2, abs=1e-12)


# --- intersection_volume -----------------------------------------------------

def test_identical_unit_cubes():
    a = Aabb(Vec3(0, 0, 0), Vec3(1, 1, 1))
    assert intersection_volume(a, a) == 1.0


def test_offset_unit_cubes():
    a = Aabb(Vec3(0, 0, 0), Vec3(1, 1, 1))
    b = Aabb(Vec3(0.5, 0, 0), Vec3(1.5, 1, 1))
    assert intersection_volume(a, b) == pytest.approx(0.5)


def test_touching_is_zero():
    a = Aabb(Vec3(0, 0, 0), Vec3(1, 1, 1))
    b = Aabb(Vec3(1, 0, 0), Vec3(2, 1, 1))
    assert intersection_volume(a, b) == 0.0


def _random_box(rng, span=3.0):
    lo = Vec3(rng.uniform(-span, span), rng.uniform(-span, span), rng.uniform(-span, span))
    return Aabb(lo, Vec3(lo.x + rng.uniform(0.2, 2), lo.y + rng.uniform(0.2, 2), lo.z + rng.uniform(0.2, 2)))


def _grid_overlap_1d(a0, a1, b0, b1, n=2000):
    lo, hi = min(a0, b0), max(a1, b1)
    h = (hi - lo) / n
    count = sum(1 for i in range(n) if a0 <= lo + (i + 0.5) * h <= a1 and b0 <= lo + (i + 0.5) * h <= b1)
    return count * h


def test_random_pairs_against_grid_oracle():
    rng = random.Random(11)
    for _ in range(60):
        a = _random_box(rng)
        # Force meaningful overlap so the oracle is well conditioned.
        shift = Vec3(rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3))
        b = Aabb(a.min + shift, a.max + shift)
        vol = intersection_volume(a, b)
        oracle = (
            _grid_overlap_1d(a.min.x, a.max.x, b.min.x, b.max.x)
            * _grid_overlap_1d(a.min.y, a.max.y, b.min.y, b.max.y)
            * _grid_overlap_1d(a.min.z, a.max.z, b.min.z, b.max.z)
        )
        assert vol == pytest.approx(oracle, rel=0.01)


def test_intersection_symmetry_and_self_volume():
    rng = random.Random(3)
    for _ in range(100):
        a, b = _random_box(rng), _random_box(rng)
        assert intersection_volume(a, b) == intersection_volume(b, a)
        assert intersection_volume(a, a) == pytest.approx(a.volume())


# --- frames ------------------------------------------------------------------

def test_identity_frame_is_noop():
    p = Vec3(1.25, -2.5, 0.75)
    assert to_frame(p, DEFAULT_FRAME) == p
    assert from_frame(p, DEFAULT_FRAME) == p


def test_round_trip_random():
    rng = random.Random(5)
    for _ in range(1000):
        p = Vec3(rng.uniform(-10, 10), rng.uniform(-10, 10), rng.uniform(-5, 5))
        f = Frame(Vec3(rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3)), rng.randrange(4))
        q = from_frame(to_frame(p, f), f)
        assert q.x == pytest.approx(p.x, abs=1e-12)
        assert q.y == pytest.approx(p.y, abs=1e-12)
        assert q.z == pytest.approx(p.z, abs=1e-12)


def test_rotation_against_matrix_oracle():
    f = Frame(Vec3(0, 0, 0), 1)
    p = to_frame(Vec3(1, 0, 0), f)
    assert math.hypot(p.x, p.y) == pytest.approx(1.0)
    assert p.z == 0.0
    m = rot_matrix(-1)
    ox, oy = apply_matrix(m, 1, 0)
    assert (p.x, p.y) == pytest.approx((ox, oy), abs=1e-12)

    q = Vec3(1, 0, 0)
    for _ in range(4):
        q = to_frame(q, f)
    assert (q.x, q.y, q.z) == pytest.approx((1, 0, 0), abs=1e-12)


def test_rotate_xy_is_exact_quarter_turn():
    assert rotate_xy(1.0, 2.0, 1) == (-2.0, 1.0)
    assert rotate_xy(1.0, 2.0, 2) == (-1.0, -2.0)
    assert rotate_xy(1.0, 2.0, 3) == (2.0, -1.0)
    assert rotate_xy(1.0, 2.0, 4) == (1.0, 2.0)
    assert rotate_xy(1.0, 2.0, -1) == rotate_xy(1.0, 2.0, 3)


def test_facing_frame_round_trip():
    for f in Facing:
        frame = Frame(Vec3(0, 0, 0), frame_rotation_for_facing(f))
        assert facing_in_frame(f, frame) is Facing.Y_POS
        assert facing_to_world(Facing.Y_POS, frame) is f


def test_frame_x_axis_is_clockwise_from_y():
    # Facing X_POS: local +y is world +x, so local +x must be world -y.
    frame = Frame(Vec3(0, 0, 0), frame_rotation_for_facing(Facing.X_POS))
    p = from_frame(Vec3(1, 0, 0), frame)
    assert (p.x, p.y) == (0.0, -1.0)


# --- quantize_direction -------------------------------------------------------

def test_on_axis():
    assert quantize_direction(0.0, 3.2) is Facing.Y_POS
    assert quantize_direction(0.1, -2.0) is Facing.Y_NEG


def test_tie_break_order():
    # (-1,-1) ties X_NEG and Y_NEG; enumerating dot products with the
    # fixed priority X_POS > Y_POS > X_NEG > Y_NEG picks X_NEG.
    cards = [Facing.X_POS, Facing.Y_POS, Facing.X_NEG, Facing.Y_NEG]
    vecs = {Facing.X_POS: (1, 0), Facing.Y_POS: (0, 1), Facing.X_NEG: (-1, 0), Facing.Y_NEG: (0, -1)}
    dots = [(-1 * vx + -1 * vy) for vx, vy in (vecs[c] for c in cards)]
    best = max(dots)
    expected = next(c for c, d in zip(cards, dots) if d == best)
    assert expected is Facing.X_NEG
    assert quantize_direction(-1.0, -1.0) is Facing.X_NEG


def test_zero_vector_uses_fallback():
    assert quantize_direction(0.0, 0.0, fallback=Facing.X_NEG) is Facing.X_NEG
    with pytest.raises(ValueError):
        quantize_direction(0.0, 0.0)


def test_aligned_direction_keeps_facing():
    for f in Facing:
        frame_vecs = {Facing.X_POS: (2.0, 0.0), Facing.X_NEG: (-2.0, 0.0),
                      Facing.Y_POS: (0.0, 2.0), Facing.Y_NEG: (0.0, -2.0)}
        dx, dy = frame_vecs[f]
        assert quantize_direction(dx, dy) is f


# --- footprint ---------------------------------------------------------------

def test_footprint_identical_and_disjoint():
    a = Aabb(Vec3(0, 0, 0), Vec3(1, 1, 1))
    b = Aabb(Vec3(2, 0, 0), Vec3(3, 1, 1))
    assert footprint_overlap_area(a, a) == 1.0
    assert footprint_overlap_area(a, b) == 0.0


def test_footprint_against_2d_interval_oracle():
    rng = random.Random(13)
    for _ in range(200):
        a, b = _random_box(rng), _random_box(rng)
        ox = max(0.0, min(a.max.x, b.max.x) - max(a.min.x, b.min.x))
        oy = max(0.0, min(a.max.y, b.max.y) - max(a.min.y, b.min.y))
        assert footprint_overlap_area(a, b) == ox * oy
