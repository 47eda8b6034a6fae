import json
import math
import random

import pytest

from psdl.errors import (
    IdentifierCollisionError,
    PsdlRuntimeError,
    WriteToSceneError,
)
from psdl.geometry import DEFAULT_FRAME, Facing, Vec3, aabb_of, rotate_xy
from psdl.interp import (
    Layout,
    bind_template,
    binding_identifiers,
    execute,
    set_coordinate_frame,
    write_attribute,
    write_facing,
)
from psdl.lang import parse

from conftest import DESK_ROW_PROGRAM, make_template


# --- bind_template -----------------------------------------------------------

def test_duplicate_names_bind_indexed_and_grouped():
    t = make_template("dup", (6, 4, 3), [
        ("c1", "Chair", 0.5, 0.5, 0.9, "STANDING"),
        ("c2", "Chair", 0.5, 0.5, 0.9, "STANDING"),
        ("t1", "Table", 1.2, 0.8, 0.75, "STANDING"),
    ])
    env = bind_template(t)
    names = set(env.bindings)
    assert names == {"scene", "chair_0", "chair_1", "chairs", "table"}
    assert env.bindings["chairs"] == [env.bindings["chair_0"], env.bindings["chair_1"]]
    assert binding_identifiers(t) == ["chair_0", "chair_1", "table"]


def test_empty_template_binds_only_scene():
    env = bind_template(make_template("empty", (6, 4, 3), []))
    assert set(env.bindings) == {"scene"}


def test_scene_extents_in_default_frame():
    env = bind_template(make_template("s", (6, 4, 3), []))
    box = aabb_of(env.scene, DEFAULT_FRAME)
    assert box.min == Vec3(-3.0, -2.0, 0.0)
    assert box.max == Vec3(3.0, 2.0, 3.0)


def test_sanitization_and_trailing_index_grouping():
    t = make_template("g", (8, 8, 3), [
        ("a", "Chair 1", 0.5, 0.5, 0.9, "STANDING"),
        ("b", "Chair 2", 0.5, 0.5, 0.9, "STANDING"),
    ])
    env = bind_template(t)
    assert {"chair_0", "chair_1", "chairs"} <= set(env.bindings)


def test_identifier_collision_detected():
    t = make_template("bad", (6, 4, 3), [
        ("a", "Chair", 0.5, 0.5, 0.9, "STANDING"),
        ("b", "Chair", 0.5, 0.5, 0.9, "STANDING"),
        ("c", "Chairs", 1.0, 0.5, 0.9, "STANDING"),
    ])
    with pytest.raises(IdentifierCollisionError):
        bind_template(t)


def test_default_placement():
    t = make_template("d", (6, 4, 3), [("x", "Box", 1, 1, 0.8, "STANDING")])
    layout = execute(parse(""), t)
    (obj,) = layout.objects
    assert obj.center == Vec3(0.0, 0.0, 0.4)
    assert obj.facing is Facing.Y_POS
    assert not obj.placed


# --- the four-statement example ------------------------------------------------

def test_relative_placement_golden(chair_table_template):
    src = (
        "chair.max.x = table.min.x - 0.1\n"
        "chair.center.y = table.center.y\n"
        "chair.min.z = scene.min.z\n"
        "chair.facing = table\n"
    )
    layout = execute(parse(src), chair_table_template)
    chair, table = layout.objects
    # Hand evaluation: the table sits at the scene center by default.
    table_min_x = -0.6
    assert table.center == Vec3(0.0, 0.0, 0.375)
    assert chair.center.x == pytest.approx(table_min_x - 0.1 - 0.25, abs=1e-12)
    assert chair.center.y == 0.0
    assert chair.center.z == pytest.approx(0.45, abs=1e-12)
    assert chair.facing is Facing.X_POS  # toward the table on its right
    assert chair.placed and not table.placed


def test_reading_placed_object(chair_table_template):
    src = "table.center.y = 1\nchair.center.y = table.center.y\n"
    layout = execute(parse(src), chair_table_template)
    chair, table = layout.objects
    assert table.center.y == 1.0
    assert chair.center.y == 1.0


# --- write_attribute -----------------------------------------------------------

def test_min_write_translates_never_resizes():
    t = make_template("w", (12, 12, 12), [("u", "Unit", 1, 1, 1, "STANDING")])
    env = bind_template(t)
    obj = env.objects[0]
    obj.center = Vec3(0, 0, 5)
    write_attribute(env, obj, "min", "z", 0.0)
    assert obj.center.z == 0.5
    assert (obj.width, obj.depth, obj.height) == (1, 1, 1)


def test_write_to_scene_rejected():
    env = bind_template(make_template("s", (6, 4, 3), []))
    with pytest.raises(WriteToSceneError):
        write_attribute(env, env.scene, "center", "x", 1.0)
    with pytest.raises(WriteToSceneError):
        write_facing(env, env.scene, Facing.X_POS)


def _random_env_with_frame(rng, grid=None):
    def val(lo, hi):
        if grid is None:
            return rng.uniform(lo, hi)
        return round(rng.uniform(lo, hi) * grid) / grid
    t = make_template("rw", (40, 40, 40), [
        ("a", "Anchor", 1, 1, 1, "STANDING"),
        ("o", "Obj", val(0.2, 3), val(0.2, 3), val(0.2, 3), "STANDING"),
    ])
    env = bind_template(t)
    anchor = env.objects[0]
    anchor.center = Vec3(val(-5, 5), val(-5, 5), val(0.5, 5))
    anchor.facing = rng.choice(list(Facing))
    set_coordinate_frame(env, anchor)
    return env, env.objects[1]


def test_write_read_exact_on_dyadic_grid():
    # Values on a power-of-two grid survive every frame transform exactly,
    # so read-after-write must be bit-exact across all four rotations.
    rng = random.Random(17)
    grid = 2 ** 12
    for _ in range(1000):
        env, obj = _random_env_with_frame(rng, grid=grid)
        attr = rng.choice(["center", "min", "max"])
        comp = rng.choice(["x", "y", "z"])
        value = round(rng.uniform(-4, 4) * grid) / grid
        write_attribute(env, obj, attr, comp, value)
        box = aabb_of(obj, env.frame)
        got = {"center": None, "min": box.min, "max": box.max}[attr]
        if attr == "center":
            from psdl.geometry import to_frame
            got_v = to_frame(obj.center, env.frame).component(comp)
        else:
            got_v = got.component(comp)
        assert got_v == value


def test_write_read_within_one_ulp_for_arbitrary_doubles():
    rng = random.Random(23)
    worst = 0.0
    for _ in range(1000):
        env, obj = _random_env_with_frame(rng)
        attr = rng.choice(["center", "min", "max"])
        comp = rng.choice(["x", "y", "z"])
        value = rng.uniform(-4, 4)
        write_attribute(env, obj, attr, comp, value)
        from psdl.geometry import to_frame
        if attr == "center":
            got = to_frame(obj.center, env.frame).component(comp)
        else:
            box = aabb_of(obj, env.frame)
            got = (box.min if attr == "min" else box.max).component(comp)
        worst = max(worst, abs(got - value))
    assert worst <= 4 * math.ulp(16.0)


# --- write_facing -----------------------------------------------------------------

def test_facing_toward_object_on_axis(chair_table_template):
    layout = execute(parse("table.center.y = 2\nchair.facing = table\n"), chair_table_template)
    chair, _ = layout.objects
    assert chair.facing is Facing.Y_POS


def test_facing_copy_is_exact(chair_table_template):
    src = "table.facing = X_NEG\nchair.facing = table.facing\n"
    layout = execute(parse(src), chair_table_template)
    chair, table = layout.objects
    assert table.facing is Facing.X_NEG
    assert chair.facing is Facing.X_NEG


def test_facing_copy_inside_rotated_frame(counter_template):
    # Copying a facing must be frame-independent: read and write cancel.
    src = (
        "counter.facing = X_POS\n"
        "set_coordinate_frame(counter)\n"
        "stool_0.facing = counter.facing\n"
    )
    layout = execute(parse(src), counter_template)
    assert layout.objects[1].facing is Facing.X_POS


def test_cardinal_interpreted_in_current_frame(counter_template):
    src = (
        "counter.facing = X_POS\n"
        "set_coordinate_frame(counter)\n"
        "stool_0.facing = Y_POS\n"
    )
    layout = execute(parse(src), counter_template)
    # Frame y-axis is the counter's facing, so local Y_POS is world X_POS.
    assert layout.objects[1].facing is Facing.X_POS


def test_facing_zero_vector_keeps_current(chair_table_template):
    src = "chair.center.x = table.center.x\nchair.center.y = table.center.y\nchair.facing = X_NEG\nchair.facing = table\n"
    layout = execute(parse(src), chair_table_template)
    chair, _ = layout.objects
    assert chair.facing is Facing.X_NEG


# --- set_coordinate_frame -----------------------------------------------------------

def test_scene_resets_frame(counter_template):
    env = bind_template(counter_template)
    counter = env.objects[0]
    counter.center = Vec3(2, 3, 0.55)
    counter.facing = Facing.X_POS
    set_coordinate_frame(env, counter)
    assert env.frame != DEFAULT_FRAME
    set_coordinate_frame(env, env.scene)
    assert env.frame == DEFAULT_FRAME


def test_frame_origin_and_rotation(counter_template):
    env = bind_template(counter_template)
    counter = env.objects[0]
    counter.center = Vec3(2, 3, 0.5)
    counter.facing = Facing.X_POS
    set_coordinate_frame(env, counter)
    assert env.frame.origin == Vec3(2, 3, 0.5)
    from psdl.geometry import from_frame
    p = from_frame(Vec3(0, 1, 0), env.frame)
    assert (p.x, p.y) == (3.0, 3.0)  # local +y maps to world +x


def test_frame_placement_is_facing_invariant(counter_template):
    # One meter "in front of" the counter means the same relative spot for
    # every facing of the counter.
    rel_positions = []
    for facing in ("Y_POS", "X_NEG", "Y_NEG", "X_POS"):
        src = (
            f"counter.center.x = 1\ncounter.center.y = 2\ncounter.facing = {facing}\n"
            "set_coordinate_frame(counter)\n"
            "stool_0.center.x = 0.5\n"
            "stool_0.center.y = 1\n"
        )
        layout = execute(parse(src), counter_template)
        counter, stool = layout.objects[0], layout.objects[1]
        k = {"Y_POS": 0, "X_NEG": 1, "Y_NEG": 2, "X_POS": 3}[facing]
        rel = rotate_xy(stool.center.x - counter.center.x, stool.center.y - counter.center.y, -k)
        rel_positions.append(rel)
    for rel in rel_positions[1:]:
        assert rel[0] == pytest.approx(rel_positions[0][0], abs=1e-12)
        assert rel[1] == pytest.approx(rel_positions[0][1], abs=1e-12)


# --- execution semantics --------------------------------------------------------

def test_template_preserved(desk_row_template):
    layout = execute(parse(DESK_ROW_PROGRAM), desk_row_template)
    assert [o.id for o in layout.objects] == [o.id for o in desk_row_template.objects]
    for obj, tmpl_obj in zip(layout.objects, desk_row_template.objects):
        assert (obj.width, obj.depth, obj.height) == (tmpl_obj.width, tmpl_obj.depth, tmpl_obj.height)
        assert obj.support == tmpl_obj.support


def test_determinism_bit_identical(desk_row_template):
    p = parse(DESK_ROW_PROGRAM)
    a = execute(p, desk_row_template)
    b = execute(p, desk_row_template)
    assert json.dumps(a.to_json()) == json.dumps(b.to_json())


def test_execute_does_not_mutate_inputs(desk_row_template):
    p = parse(DESK_ROW_PROGRAM)
    first = execute(p, desk_row_template)
    first.objects[0].center = Vec3(99, 99, 99)
    second = execute(p, desk_row_template)
    assert second.objects[0].center.x != 99


def test_loop_variables_and_arithmetic():
    t = make_template("grid", (20, 20, 3), [
        (f"b{i}", "Box", 0.5, 0.5, 0.5, "STANDING") for i in range(6)
    ])
    src = (
        "g = 1.5\n"
        "for i, b in enumerate(boxs):\n"
        "    b.center.x = scene.min.x + 1 + (i - 3 * floor(i / 3)) * g\n"
        "    b.center.y = scene.min.y + 1 + floor(i / 3) * g\n"
    )
    layout = execute(parse(src), t)
    xs = [o.center.x for o in layout.objects]
    assert xs[0] == pytest.approx(-9.0)
    assert xs[1] == pytest.approx(-7.5)
    assert xs[3] == pytest.approx(-9.0)


def test_if_truthiness_numeric():
    t = make_template("c", (6, 6, 3), [("a", "Box", 1, 1, 1, "STANDING")])
    src = "if 2 - 2:\n    box.center.x = 1\nelse:\n    box.center.x = -1\n"
    layout = execute(parse(src), t)
    assert layout.objects[0].center.x == -1.0


# --- runtime errors ---------------------------------------------------------------

def _expect_runtime(src, template, fragment):
    with pytest.raises(PsdlRuntimeError) as e:
        execute(parse(src), template)
    assert fragment in str(e.value)
    assert e.value.line >= 1


def test_unknown_identifier(chair_table_template):
    _expect_runtime("lamp.center.x = 0\n", chair_table_template, "unknown identifier")


def test_write_to_scene_via_program(chair_table_template):
    _expect_runtime("scene.center.x = 1\n", chair_table_template, "read-only")
    _expect_runtime("scene = 3\n", chair_table_template, "scene")


def test_index_out_of_range():
    t = make_template("g", (6, 6, 3), [
        ("a", "Box", 1, 1, 1, "STANDING"),
        ("b", "Box", 1, 1, 1, "STANDING"),
    ])
    _expect_runtime("boxs[5].center.x = 0\n", t, "out of range")


def test_non_integer_loop_bound(chair_table_template):
    _expect_runtime("for i in range(2.5): chair.center.x = i\n", chair_table_template, "whole number")


def test_bad_unpack(chair_table_template):
    _expect_runtime("for a, b in range(3): chair.center.x = a\n", chair_table_template, "unpack")


def test_division_by_zero_at_runtime(chair_table_template):
    _expect_runtime("z = 0\nchair.center.x = 1 / z\n", chair_table_template, "division by zero")


def test_error_reports_statement_position(chair_table_template):
    with pytest.raises(PsdlRuntimeError) as e:
        execute(parse("chair.center.x = 0\nlamp.center.y = 1\n"), chair_table_template)
    assert e.value.line == 2


def test_non_finite_attribute_value_rejected(chair_table_template):
    _expect_runtime("chair.center.x = 1e308 * 100\n", chair_table_template, "finite")


def test_facing_assignment_needs_object_or_direction(chair_table_template):
    _expect_runtime("chair.facing = 3\n", chair_table_template, "facing must be")


def test_group_list_is_not_an_assignment_target():
    t = make_template("g", (6, 6, 3), [
        ("a", "Box", 1, 1, 1, "STANDING"),
        ("b", "Box", 1, 1, 1, "STANDING"),
    ])
    _expect_runtime("boxs.center.x = 0\n", t, "not a scene object")


# --- layout JSON ---------------------------------------------------------------

def test_layout_json_round_trip(desk_row_template, tmp_path):
    layout = execute(parse(DESK_ROW_PROGRAM), desk_row_template)
    path = tmp_path / "layout.json"
    layout.save(path)
    loaded = Layout.load(path)
    assert json.dumps(loaded.to_json()) == json.dumps(layout.to_json())
    for a, b in zip(loaded.objects, layout.objects):
        assert a.center == b.center and a.facing is b.facing
