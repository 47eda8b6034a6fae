"""AST node types and structural-path utilities.

Nodes are frozen dataclasses; source spans are excluded from equality so
that "structurally identical" means identical shape and values regardless
of formatting. Every node is addressable by a path: a tuple of field
names and tuple indices from the Program root, e.g.
("statements", 2, "body", 0, "expr", "right").
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Iterator, Union

from ..geometry import Facing


@dataclass(frozen=True)
class Span:
    line: int = 0
    col: int = 0


NO_SPAN = Span()


def _span_field():
    return field(default=NO_SPAN, compare=False, repr=False)


# --- expressions ---------------------------------------------------------

@dataclass(frozen=True)
class NumberLit:
    value: float
    editable: bool = True
    span: Span = _span_field()


@dataclass(frozen=True)
class DirectionLit:
    facing: Facing
    span: Span = _span_field()


@dataclass(frozen=True)
class VarRef:
    name: str
    span: Span = _span_field()


@dataclass(frozen=True)
class AttrRead:
    obj: "Expr"
    attr: str                      # width|depth|height|facing|center|min|max
    component: str | None = None   # x|y|z for the vector attributes
    span: Span = _span_field()


@dataclass(frozen=True)
class BinOp:
    op: str                        # one of + - * /
    left: "Expr"
    right: "Expr"
    span: Span = _span_field()


@dataclass(frozen=True)
class UnaryNeg:
    operand: "Expr"
    span: Span = _span_field()


@dataclass(frozen=True)
class Call:
    func: str                      # whitelisted builtin name
    args: tuple["Expr", ...]
    span: Span = _span_field()


@dataclass(frozen=True)
class ListIndex:
    seq: "Expr"
    index: "Expr"
    span: Span = _span_field()


Expr = Union[NumberLit, DirectionLit, VarRef, AttrRead, BinOp, UnaryNeg, Call, ListIndex]


# --- statements ----------------------------------------------------------

@dataclass(frozen=True)
class AttrAssign:
    obj: Expr
    attr: str                      # center|min|max
    component: str                 # x|y|z
    expr: Expr
    span: Span = _span_field()


@dataclass(frozen=True)
class FacingAssign:
    obj: Expr
    rhs: Expr
    span: Span = _span_field()


@dataclass(frozen=True)
class FrameSet:
    obj: Expr
    span: Span = _span_field()


@dataclass(frozen=True)
class VarAssign:
    name: str
    expr: Expr
    span: Span = _span_field()


@dataclass(frozen=True)
class For:
    names: tuple[str, ...]
    iterable: Expr
    body: tuple["Stmt", ...]
    span: Span = _span_field()


@dataclass(frozen=True)
class If:
    cond: Expr
    body: tuple["Stmt", ...]
    orelse: tuple["Stmt", ...] = ()
    span: Span = _span_field()


Stmt = Union[AttrAssign, FacingAssign, FrameSet, VarAssign, For, If]


@dataclass(frozen=True)
class Program:
    statements: tuple[Stmt, ...] = ()


# Child fields per node type, in source order. Only fields listed here are
# walked; scalar data (names, operators, flags) is not a child.
_CHILD_FIELDS: dict[type, tuple[str, ...]] = {
    Program: ("statements",),
    AttrAssign: ("obj", "expr"),
    FacingAssign: ("obj", "rhs"),
    FrameSet: ("obj",),
    VarAssign: ("expr",),
    For: ("iterable", "body"),
    If: ("cond", "body", "orelse"),
    NumberLit: (),
    DirectionLit: (),
    VarRef: (),
    AttrRead: ("obj",),
    BinOp: ("left", "right"),
    UnaryNeg: ("operand",),
    Call: ("args",),
    ListIndex: ("seq", "index"),
}

NodePath = tuple[Union[str, int], ...]


def iter_nodes(root, path: NodePath = ()) -> Iterator[tuple[NodePath, object]]:
    """Pre-order walk yielding (path, node) in source order."""
    yield path, root
    for name in _CHILD_FIELDS[type(root)]:
        child = getattr(root, name)
        if isinstance(child, tuple):
            for i, sub in enumerate(child):
                yield from iter_nodes(sub, path + (name, i))
        else:
            yield from iter_nodes(child, path + (name,))


def resolve(root, path: NodePath):
    """Node at `path`, or None when the path does not resolve."""
    node = root
    for step in path:
        if isinstance(step, int):
            if not isinstance(node, tuple) or step >= len(node):
                return None
            node = node[step]
        else:
            if not dataclasses.is_dataclass(node) or not hasattr(node, step):
                return None
            node = getattr(node, step)
    return node


def replace_at(root, path: NodePath, new_node):
    """Copy of `root` with the node at `path` replaced. Shares subtrees."""
    if not path:
        return new_node
    step = path[0]
    if isinstance(step, int):
        assert isinstance(root, tuple)
        return root[:step] + (replace_at(root[step], path[1:], new_node),) + root[step + 1:]
    child = getattr(root, step)
    return dataclasses.replace(root, **{step: replace_at(child, path[1:], new_node)})
