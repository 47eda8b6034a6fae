"""Language front-end: parse, print, and rewrite scene programs."""
from .edits import CONSTANT, DIRECTION, EditSite, apply_edit, edit_sites
from .nodes import (
    AttrAssign,
    AttrRead,
    BinOp,
    Call,
    DirectionLit,
    Expr,
    FacingAssign,
    For,
    FrameSet,
    If,
    ListIndex,
    NodePath,
    NumberLit,
    Program,
    Span,
    Stmt,
    UnaryNeg,
    VarAssign,
    VarRef,
    iter_nodes,
    replace_at,
    resolve,
)
from .parser import BUILTINS, parse
from .printer import format_number, unparse

__all__ = [
    "AttrAssign", "AttrRead", "BinOp", "BUILTINS", "Call", "CONSTANT", "DIRECTION",
    "DirectionLit", "EditSite", "Expr", "FacingAssign", "For", "FrameSet", "If",
    "ListIndex", "NodePath", "NumberLit", "Program", "Span", "Stmt", "UnaryNeg",
    "VarAssign", "VarRef", "apply_edit", "edit_sites", "format_number",
    "iter_nodes", "parse", "replace_at", "resolve", "unparse",
]
