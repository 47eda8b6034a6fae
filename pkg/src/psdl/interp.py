"""Program execution: template binding, frames, write-through assignment.

A program runs against a scene template. The template pre-instantiates
every object; the program only moves and orients them, via assignments
to center/min/max components (which translate the object so the
equation holds) and to facing. All positions are stored in world
coordinates; reads and writes are interpreted in the current coordinate
frame, which defaults to the scene frame (origin at the floor center,
axes world-aligned, z up) and can be re-centered on any object.
"""
from __future__ import annotations

import enum
import json
import math
import re
from dataclasses import dataclass

from . import geometry
from .errors import IdentifierCollisionError, PsdlRuntimeError, WriteToSceneError
from .geometry import DEFAULT_FRAME, Aabb, Facing, Frame, Vec3
from .lang import nodes


class Support(enum.Enum):
    STANDING = "STANDING"
    WALL_MOUNTED = "WALL_MOUNTED"
    FLOATING = "FLOATING"

    def __repr__(self) -> str:
        return self.name


@dataclass(frozen=True)
class TemplateObject:
    id: str
    name: str
    width: float
    depth: float
    height: float
    support: Support


@dataclass(frozen=True)
class SceneTemplate:
    name: str
    width: float
    depth: float
    height: float
    objects: tuple[TemplateObject, ...]

    def __post_init__(self) -> None:
        if min(self.width, self.depth, self.height) <= 0:
            raise ValueError("scene dimensions must be positive")
        ids = [o.id for o in self.objects]
        if len(set(ids)) != len(ids):
            raise ValueError("object ids must be unique")
        for o in self.objects:
            if min(o.width, o.depth, o.height) <= 0:
                raise ValueError(f"object {o.id!r} has non-positive dimensions")

    @staticmethod
    def from_json(data: dict) -> "SceneTemplate":
        dims = data["dims"]
        objects = tuple(
            TemplateObject(
                id=str(o["id"]),
                name=str(o["name"]),
                width=float(o["width"]),
                depth=float(o["depth"]),
                height=float(o["height"]),
                support=Support(str(o["support"]).replace("-", "_").upper()),
            )
            for o in data["objects"]
        )
        return SceneTemplate(
            name=str(data.get("name", "")),
            width=float(dims["width"]),
            depth=float(dims["depth"]),
            height=float(dims["height"]),
            objects=objects,
        )

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "dims": {"width": self.width, "depth": self.depth, "height": self.height},
            "objects": [
                {
                    "id": o.id, "name": o.name, "width": o.width, "depth": o.depth,
                    "height": o.height, "support": o.support.value,
                }
                for o in self.objects
            ],
        }

    @staticmethod
    def load(path) -> "SceneTemplate":
        with open(path, "r", encoding="utf-8") as fh:
            return SceneTemplate.from_json(json.load(fh))


@dataclass
class ObjectState:
    """One placed cuboid. Dimensions are fixed; center and facing move."""

    id: str
    name: str
    width: float
    depth: float
    height: float
    support: Support
    center: Vec3
    facing: Facing
    placed: bool = False

    def world_aabb(self) -> Aabb:
        return geometry.aabb_of(self, DEFAULT_FRAME)


@dataclass
class SceneObject:
    """The read-only bounding cuboid of the whole scene.

    Exposes the same geometric attributes as a placed object so frame
    and AABB math treat it uniformly. Its floor sits at z = 0.
    """

    width: float
    depth: float
    height: float

    @property
    def center(self) -> Vec3:
        return Vec3(0.0, 0.0, self.height / 2.0)

    @property
    def facing(self) -> Facing:
        return Facing.Y_POS


@dataclass
class Layout:
    """Final world-space placement of every template object."""

    name: str
    width: float
    depth: float
    height: float
    objects: list[ObjectState]

    def scene_box(self) -> Aabb:
        return Aabb(
            Vec3(-self.width / 2.0, -self.depth / 2.0, 0.0),
            Vec3(self.width / 2.0, self.depth / 2.0, self.height),
        )

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "dims": {"width": self.width, "depth": self.depth, "height": self.height},
            "objects": [
                {
                    "id": o.id, "name": o.name, "width": o.width, "depth": o.depth,
                    "height": o.height, "support": o.support.value,
                    "center": [o.center.x, o.center.y, o.center.z],
                    "facing": o.facing.name,
                }
                for o in self.objects
            ],
        }

    @staticmethod
    def from_json(data: dict) -> "Layout":
        dims = data["dims"]
        objects = [
            ObjectState(
                id=str(o["id"]), name=str(o["name"]),
                width=float(o["width"]), depth=float(o["depth"]), height=float(o["height"]),
                support=Support(str(o["support"]).replace("-", "_").upper()),
                center=Vec3(*[float(v) for v in o["center"]]),
                facing=Facing[o["facing"]],
                placed=True,
            )
            for o in data["objects"]
        ]
        return Layout(
            name=str(data.get("name", "")),
            width=float(dims["width"]), depth=float(dims["depth"]), height=float(dims["height"]),
            objects=objects,
        )

    @staticmethod
    def load(path) -> "Layout":
        with open(path, "r", encoding="utf-8") as fh:
            return Layout.from_json(json.load(fh))

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json(), fh, indent=2)
            fh.write("\n")


_TRAILING_INDEX = re.compile(r"_\d+$")


def sanitize_identifier(name: str) -> str:
    ident = "".join(c.lower() if c.isalnum() else "_" for c in name)
    if not ident or ident[0].isdigit():
        ident = "_" + ident
    return ident


def base_name(name: str) -> str:
    """Sanitized name with one trailing _<digits> index stripped."""
    ident = sanitize_identifier(name)
    stripped = _TRAILING_INDEX.sub("", ident)
    return stripped if stripped else ident


def binding_identifiers(template: SceneTemplate) -> list[str]:
    """The identifier each template object is bound to, in template order.

    Objects with a unique base name bind to it directly; objects sharing
    a base name `foo` bind to foo_0..foo_{k-1} (a list binding `foos` is
    added alongside by bind_template).
    """
    bases = [base_name(o.name) for o in template.objects]
    counts: dict[str, int] = {}
    for b in bases:
        counts[b] = counts.get(b, 0) + 1
    seen: dict[str, int] = {}
    idents = []
    for b in bases:
        if counts[b] == 1:
            idents.append(b)
        else:
            i = seen.get(b, 0)
            seen[b] = i + 1
            idents.append(f"{b}_{i}")
    return idents


class Environment:
    """Variable bindings, the current frame, and the scene object."""

    def __init__(self, template: SceneTemplate):
        self.frame: Frame = DEFAULT_FRAME
        self.scene = SceneObject(template.width, template.depth, template.height)
        self.objects: list[ObjectState] = [
            ObjectState(
                id=o.id, name=o.name, width=o.width, depth=o.depth, height=o.height,
                support=o.support,
                center=Vec3(0.0, 0.0, o.height / 2.0),
                facing=Facing.Y_POS,
            )
            for o in template.objects
        ]
        self.bindings: dict[str, object] = {"scene": self.scene}

        idents = binding_identifiers(template)
        groups: dict[str, list[ObjectState]] = {}
        for obj, tobj in zip(self.objects, template.objects):
            groups.setdefault(base_name(tobj.name), []).append(obj)
        for ident, obj in zip(idents, self.objects):
            self._bind_fresh(ident, obj)
        for base, members in groups.items():
            if len(members) > 1:
                self._bind_fresh(base + "s", list(members))

    def _bind_fresh(self, ident: str, value) -> None:
        if ident in self.bindings:
            raise IdentifierCollisionError(
                f"identifier {ident!r} is produced by more than one template name")
        self.bindings[ident] = value

    def lookup(self, name: str):
        try:
            return self.bindings[name]
        except KeyError:
            raise PsdlRuntimeError(f"unknown identifier {name!r}") from None


def bind_template(template: SceneTemplate) -> Environment:
    return Environment(template)


# --- attribute access ----------------------------------------------------

_VECTOR_ATTRS = ("center", "min", "max")


def _attr_in_frame(obj, attr: str, component: str, frame: Frame) -> float:
    if attr == "center":
        return geometry.to_frame(obj.center, frame).component(component)
    box = geometry.aabb_of(obj, frame)
    side = box.min if attr == "min" else box.max
    return side.component(component)


def _axis_and_sign(component: str, frame: Frame) -> tuple[str, float]:
    """World axis and sign that feed a frame component (quarter turns only)."""
    if component == "z":
        return "z", 1.0
    ex, ey = geometry.rotate_xy(1.0 if component == "x" else 0.0,
                                0.0 if component == "x" else 1.0,
                                frame.rotation)
    if ex != 0.0:
        return "x", ex
    return "y", ey


def _component_reader(obj, attr: str, component: str, frame: Frame, axis: str, sign: float):
    """Read-back of attr.component as a function of the world `axis` value.

    Replicates _attr_in_frame's arithmetic exactly, one component at a
    time: the frame value is sign * (w - origin) (quarter-turn rotations
    are pure sign/swap), min/max then offset by the half extent along
    this frame component.
    """
    o = frame.origin.component(axis)
    if attr == "center":
        if sign > 0:
            return lambda w: w - o
        return lambda w: -(w - o)
    if component == "z":
        h = obj.height / 2.0
    else:
        local_facing = geometry.facing_in_frame(obj.facing, frame)
        if local_facing in (Facing.Y_POS, Facing.Y_NEG):
            ex, ey = obj.width, obj.depth
        else:
            ex, ey = obj.depth, obj.width
        h = (ex if component == "x" else ey) / 2.0
    if attr == "min":
        if sign > 0:
            return lambda w: (w - o) - h
        return lambda w: -(w - o) - h
    if sign > 0:
        return lambda w: (w - o) + h
    return lambda w: -(w - o) + h


def write_attribute(env: Environment, obj, attr: str, component: str, value: float) -> None:
    """Translate `obj` so attr.component reads back as `value` in env's frame.

    Dimensions and facing never change. The stored world center is
    polished so the read-back equals the written value whenever the
    target is representable along the world axis.
    """
    if obj is env.scene or isinstance(obj, SceneObject):
        raise WriteToSceneError("the scene object is read-only")
    if not isinstance(obj, ObjectState):
        raise PsdlRuntimeError("assignment target is not a scene object")
    if not isinstance(value, float) or not math.isfinite(value):
        raise PsdlRuntimeError(f"attribute value must be a finite number, got {value!r}")
    frame = env.frame
    axis, sign = _axis_and_sign(component, frame)
    read = _component_reader(obj, attr, component, frame, axis, sign)

    cur_axis = obj.center.component(axis)
    guess = cur_axis + sign * (value - read(cur_axis))
    w = _solve_axis(read, value, sign, guess)
    obj.center = obj.center.with_component(axis, w)
    obj.placed = True


def _solve_axis(read, target: float, sign: float, guess: float) -> float:
    """Find w with read(w) == target; read has slope `sign` (+1/-1).

    Exact equality can be off the representable grid when magnitudes
    differ (the read path rounds w - origin and the half-extent offset),
    so after a bounded number of unit-slope corrections the closest
    achievable w wins.
    """
    w = guess
    best_w, best_err = w, abs(read(w) - target)
    if best_err == 0.0:
        return w
    for _ in range(48):
        err = read(w) - target
        if err == 0.0:
            return w
        if abs(err) < best_err:
            best_w, best_err = w, abs(err)
        nw = w - sign * err
        if nw == w:
            nw = math.nextafter(w, w - sign * err * math.inf)
        w = nw
    return best_w


def write_facing(env: Environment, obj, rhs) -> None:
    """Set facing from a cardinal value, a target object, or a copied facing.

    Cardinal values are interpreted in the current frame (attribute
    reads of facing are frame-local too, so copying another object's
    facing round-trips exactly). Assigning an object turns `obj` toward
    it: the center-to-center direction quantized to the nearest cardinal,
    keeping the current facing when centers coincide.
    """
    if obj is env.scene or isinstance(obj, SceneObject):
        raise WriteToSceneError("the scene object is read-only")
    if not isinstance(obj, ObjectState):
        raise PsdlRuntimeError("facing target is not a scene object")
    frame = env.frame
    if isinstance(rhs, Facing):
        obj.facing = geometry.facing_to_world(rhs, frame)
    elif isinstance(rhs, (ObjectState, SceneObject)):
        dx = rhs.center.x - obj.center.x
        dy = rhs.center.y - obj.center.y
        lx, ly = geometry.rotate_xy(dx, dy, -frame.rotation)
        local = geometry.quantize_direction(lx, ly, fallback=geometry.facing_in_frame(obj.facing, frame))
        obj.facing = geometry.facing_to_world(local, frame)
    else:
        raise PsdlRuntimeError(
            "facing must be a direction, an object, or another object's facing")
    obj.placed = True


def set_coordinate_frame(env: Environment, target) -> None:
    """Re-center the frame on an object (y along its facing) or reset via scene."""
    if target is env.scene or isinstance(target, SceneObject):
        env.frame = DEFAULT_FRAME
        return
    if not isinstance(target, ObjectState):
        raise PsdlRuntimeError("set_coordinate_frame expects a scene object")
    env.frame = Frame(target.center, geometry.frame_rotation_for_facing(target.facing))


# --- evaluation ----------------------------------------------------------

_EPS_WHOLE = 1e-9


def _as_int(value, what: str) -> int:
    if not isinstance(value, float):
        raise PsdlRuntimeError(f"{what} must be a number")
    r = round(value)
    if abs(value - r) > _EPS_WHOLE:
        raise PsdlRuntimeError(f"{what} must be a whole number, got {value!r}")
    return int(r)


def _as_number(value, what: str = "operand") -> float:
    if isinstance(value, float):
        return value
    raise PsdlRuntimeError(f"{what} must be a number, got {type(value).__name__}")


class _Executor:
    def __init__(self, env: Environment):
        self.env = env

    def run(self, program: nodes.Program) -> None:
        for stmt in program.statements:
            self.exec_stmt(stmt)

    def exec_stmt(self, s: nodes.Stmt) -> None:
        try:
            self._dispatch(s)
        except PsdlRuntimeError as err:
            if err.line == 0 and s.span.line:
                raise err.at(s.span.line, s.span.col) from None
            raise

    def _dispatch(self, s: nodes.Stmt) -> None:
        env = self.env
        if isinstance(s, nodes.AttrAssign):
            obj = self.eval(s.obj)
            value = self.eval(s.expr)
            write_attribute(env, obj, s.attr, s.component, _as_number(value, "attribute value"))
        elif isinstance(s, nodes.FacingAssign):
            obj = self.eval(s.obj)
            write_facing(env, obj, self.eval(s.rhs))
        elif isinstance(s, nodes.FrameSet):
            set_coordinate_frame(env, self.eval(s.obj))
        elif isinstance(s, nodes.VarAssign):
            if s.name == "scene":
                raise WriteToSceneError("cannot rebind 'scene'")
            env.bindings[s.name] = self.eval(s.expr)
        elif isinstance(s, nodes.For):
            self._exec_for(s)
        elif isinstance(s, nodes.If):
            cond = _as_number(self.eval(s.cond), "condition")
            branch = s.body if cond != 0.0 else s.orelse
            for sub in branch:
                self.exec_stmt(sub)
        else:
            raise PsdlRuntimeError(f"unexpected statement {type(s).__name__}")

    def _exec_for(self, s: nodes.For) -> None:
        items = self.eval(s.iterable)
        if not isinstance(items, list):
            raise PsdlRuntimeError("for-loop iterable must be a list").at(s.span.line, s.span.col)
        for item in items:
            if len(s.names) == 1:
                self.env.bindings[s.names[0]] = item
            else:
                if not isinstance(item, tuple) or len(item) != len(s.names):
                    raise PsdlRuntimeError(
                        f"cannot unpack loop item into {len(s.names)} names"
                    ).at(s.span.line, s.span.col)
                for name, v in zip(s.names, item):
                    self.env.bindings[name] = v
            for sub in s.body:
                self.exec_stmt(sub)

    def eval(self, e: nodes.Expr):
        env = self.env
        if isinstance(e, nodes.NumberLit):
            return e.value
        if isinstance(e, nodes.DirectionLit):
            return e.facing
        if isinstance(e, nodes.VarRef):
            return env.lookup(e.name)
        if isinstance(e, nodes.AttrRead):
            return self._eval_attr(e)
        if isinstance(e, nodes.BinOp):
            left = _as_number(self.eval(e.left))
            right = _as_number(self.eval(e.right))
            if e.op == "+":
                return left + right
            if e.op == "-":
                return left - right
            if e.op == "*":
                return left * right
            if right == 0.0:
                raise PsdlRuntimeError("division by zero")
            return left / right
        if isinstance(e, nodes.UnaryNeg):
            return -_as_number(self.eval(e.operand))
        if isinstance(e, nodes.Call):
            return self._eval_call(e)
        if isinstance(e, nodes.ListIndex):
            seq = self.eval(e.seq)
            if not isinstance(seq, (list, tuple)):
                raise PsdlRuntimeError("only lists can be indexed")
            i = _as_int(self.eval(e.index), "list index")
            if i < -len(seq) or i >= len(seq):
                raise PsdlRuntimeError(f"index {i} out of range for list of {len(seq)}")
            return seq[i]
        raise PsdlRuntimeError(f"unexpected expression {type(e).__name__}")

    def _eval_attr(self, e: nodes.AttrRead):
        obj = self.eval(e.obj)
        if not isinstance(obj, (ObjectState, SceneObject)):
            raise PsdlRuntimeError(f"{e.attr!r} read on a non-object value")
        if e.attr == "width":
            return obj.width
        if e.attr == "depth":
            return obj.depth
        if e.attr == "height":
            return obj.height
        if e.attr == "facing":
            return geometry.facing_in_frame(obj.facing, self.env.frame)
        assert e.attr in _VECTOR_ATTRS and e.component is not None
        return _attr_in_frame(obj, e.attr, e.component, self.env.frame)

    def _eval_call(self, e: nodes.Call):
        name = e.func
        args = [self.eval(a) for a in e.args]

        def arity(n: int):
            if len(args) != n:
                raise PsdlRuntimeError(f"{name}() takes {n} argument(s), got {len(args)}")

        if name == "len":
            arity(1)
            if not isinstance(args[0], (list, tuple)):
                raise PsdlRuntimeError("len() expects a list")
            return float(len(args[0]))
        if name == "range":
            if not 1 <= len(args) <= 3:
                raise PsdlRuntimeError(f"range() takes 1 to 3 arguments, got {len(args)}")
            bounds = [_as_int(a, "loop bound") for a in args]
            if len(bounds) == 3 and bounds[2] == 0:
                raise PsdlRuntimeError("range() step must not be zero")
            return [float(i) for i in range(*bounds)]
        if name == "enumerate":
            arity(1)
            if not isinstance(args[0], list):
                raise PsdlRuntimeError("enumerate() expects a list")
            return [(float(i), v) for i, v in enumerate(args[0])]
        if name in ("min", "max"):
            if len(args) < 2:
                raise PsdlRuntimeError(f"{name}() takes at least 2 arguments")
            values = [_as_number(a, f"{name}() argument") for a in args]
            return min(values) if name == "min" else max(values)
        if name == "abs":
            arity(1)
            return abs(_as_number(args[0], "abs() argument"))
        if name == "floor":
            arity(1)
            return float(math.floor(_as_number(args[0], "floor() argument")))
        if name == "cos":
            arity(1)
            return math.cos(_as_number(args[0], "cos() argument"))
        if name == "sin":
            arity(1)
            return math.sin(_as_number(args[0], "sin() argument"))
        raise PsdlRuntimeError(f"unknown function {name!r}")


def execute(program: nodes.Program, template: SceneTemplate) -> Layout:
    """Run `program` against `template` and return the resulting layout.

    Deterministic; raises PsdlRuntimeError (with statement position) on
    any execution failure. Neither input is modified.
    """
    env = bind_template(template)
    _Executor(env).run(program)
    return Layout(
        name=template.name,
        width=template.width, depth=template.depth, height=template.height,
        objects=env.objects,
    )
