"""Canonical source rendering. parse(unparse(p)) is structurally p."""
from __future__ import annotations

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
    NumberLit,
    Program,
    Stmt,
    UnaryNeg,
    VarAssign,
    VarRef,
)

_INDENT = "    "

# Precedence levels: additive < multiplicative < unary < postfix/atom.
_ADD, _MUL, _UNARY, _ATOM = 1, 2, 3, 4
_OP_PREC = {"+": _ADD, "-": _ADD, "*": _MUL, "/": _MUL}


def format_number(value: float) -> str:
    """Shortest decimal that reparses to the same float."""
    if value == int(value) and abs(value) < 1e16:
        return str(int(value))
    return repr(value)


def unparse(program: Program) -> str:
    lines: list[str] = []
    for stmt in program.statements:
        _emit(stmt, 0, lines)
    return "\n".join(lines) + ("\n" if lines else "")


def _emit(stmt: Stmt, depth: int, lines: list[str]) -> None:
    pad = _INDENT * depth
    if isinstance(stmt, AttrAssign):
        lines.append(f"{pad}{_expr(stmt.obj, _ATOM)}.{stmt.attr}.{stmt.component} = {_expr(stmt.expr, 0)}")
    elif isinstance(stmt, FacingAssign):
        lines.append(f"{pad}{_expr(stmt.obj, _ATOM)}.facing = {_expr(stmt.rhs, 0)}")
    elif isinstance(stmt, FrameSet):
        lines.append(f"{pad}set_coordinate_frame({_expr(stmt.obj, 0)})")
    elif isinstance(stmt, VarAssign):
        lines.append(f"{pad}{stmt.name} = {_expr(stmt.expr, 0)}")
    elif isinstance(stmt, For):
        lines.append(f"{pad}for {', '.join(stmt.names)} in {_expr(stmt.iterable, 0)}:")
        for s in stmt.body:
            _emit(s, depth + 1, lines)
    elif isinstance(stmt, If):
        lines.append(f"{pad}if {_expr(stmt.cond, 0)}:")
        for s in stmt.body:
            _emit(s, depth + 1, lines)
        if stmt.orelse:
            lines.append(f"{pad}else:")
            for s in stmt.orelse:
                _emit(s, depth + 1, lines)
    else:
        raise TypeError(f"unexpected statement node {type(stmt).__name__}")


def _expr(e: Expr, min_prec: int) -> str:
    text, prec = _render(e)
    if prec < min_prec:
        return f"({text})"
    return text


def _render(e: Expr) -> tuple[str, int]:
    if isinstance(e, NumberLit):
        return format_number(e.value), _ATOM
    if isinstance(e, DirectionLit):
        return e.facing.name, _ATOM
    if isinstance(e, VarRef):
        return e.name, _ATOM
    if isinstance(e, AttrRead):
        suffix = f".{e.attr}" + (f".{e.component}" if e.component else "")
        return _expr(e.obj, _ATOM) + suffix, _ATOM
    if isinstance(e, BinOp):
        prec = _OP_PREC[e.op]
        left = _expr(e.left, prec)
        # Same-precedence right operands need parens: a - (b - c).
        right = _expr(e.right, prec + 1)
        return f"{left} {e.op} {right}", prec
    if isinstance(e, UnaryNeg):
        return f"-{_expr(e.operand, _UNARY)}", _UNARY
    if isinstance(e, Call):
        return f"{e.func}({', '.join(_expr(a, 0) for a in e.args)})", _ATOM
    if isinstance(e, ListIndex):
        return f"{_expr(e.seq, _ATOM)}[{_expr(e.index, 0)}]", _ATOM
    raise TypeError(f"unexpected expression node {type(e).__name__}")
