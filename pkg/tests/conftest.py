import pytest

from psdl.interp import SceneTemplate


def make_template(name, dims, objects):
    """objects: list of (id, name, w, d, h, support)."""
    return SceneTemplate.from_json({
        "name": name,
        "dims": {"width": dims[0], "depth": dims[1], "height": dims[2]},
        "objects": [
            {"id": oid, "name": oname, "width": w, "depth": d, "height": h, "support": s}
            for oid, oname, w, d, h, s in objects
        ],
    })


@pytest.fixture
def chair_table_template():
    return make_template("pair", (6.0, 4.0, 3.0), [
        ("chair1", "Chair", 0.5, 0.5, 0.9, "STANDING"),
        ("table1", "Table", 1.2, 0.8, 0.75, "STANDING"),
    ])


@pytest.fixture
def counter_template():
    return make_template("counter", (10.0, 10.0, 3.0), [
        ("counter", "Counter", 3.0, 1.0, 1.1, "STANDING"),
        ("s1", "Stool", 0.4, 0.4, 0.7, "STANDING"),
        ("s2", "Stool", 0.4, 0.4, 0.7, "STANDING"),
        ("s3", "Stool", 0.4, 0.4, 0.7, "STANDING"),
    ])


@pytest.fixture
def desk_row_template():
    # One shared spacing constant controls all eight desks. Desk volume is
    # kept small so moving the whole row costs less transport than the
    # boundary violations it fixes.
    return make_template("desk_row", (14.0, 4.0, 3.0), [
        (f"desk-{i}", "Desk", 0.6, 0.4, 0.5, "STANDING") for i in range(8)
    ])


DESK_ROW_PROGRAM = """\
spacing = 1.3
for i, d in enumerate(desks):
    d.center.x = scene.min.x + 1 + i * spacing
    d.center.y = 0
    d.facing = Y_POS
"""
