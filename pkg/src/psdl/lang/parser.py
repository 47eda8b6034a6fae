"""Recursive-descent parser for the scene layout language.

The grammar is closed: attribute assignment statements, facing
assignment, set_coordinate_frame, variable assignment, for/if blocks,
and arithmetic expressions over numbers, directions, variables,
attribute reads, whitelisted builtin calls and list indexing.
"""
from __future__ import annotations

import dataclasses

from ..errors import MalformedTargetError, PsdlSyntaxError, UnknownBuiltinError
from ..geometry import Facing
from . import lexer
from .lexer import DEDENT, EOF, INDENT, NAME, NEWLINE, NUMBER, OP, Token
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
    Span,
    Stmt,
    UnaryNeg,
    VarAssign,
    VarRef,
)

BUILTINS = ("len", "range", "enumerate", "min", "max", "abs", "floor", "cos", "sin")

_DIRECTIONS = {f.name: f for f in Facing}
_KEYWORDS = {"for", "in", "if", "elif", "else"}
_VECTOR_ATTRS = ("center", "min", "max")
_SCALAR_ATTRS = ("width", "depth", "height")
_COMPONENTS = ("x", "y", "z")


def parse(source: str) -> Program:
    """Parse source text into a Program.

    Raises PsdlSyntaxError (with position and expected-token set),
    UnknownBuiltinError or MalformedTargetError.
    """
    return _Parser(lexer.tokenize(source)).parse_program()


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    # -- token plumbing ---------------------------------------------------

    @property
    def cur(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != EOF:
            self.pos += 1
        return tok

    def check(self, kind: str, value: str | None = None) -> bool:
        tok = self.cur
        return tok.kind == kind and (value is None or tok.value == value)

    def accept(self, kind: str, value: str | None = None) -> Token | None:
        if self.check(kind, value):
            return self.advance()
        return None

    def expect(self, kind: str, value: str | None = None, what: str | None = None) -> Token:
        if self.check(kind, value):
            return self.advance()
        expected = what or (repr(value) if value else kind)
        return self.fail(f"found {self._describe(self.cur)}", {expected})

    def fail(self, message: str, expected: set[str] = frozenset()):
        tok = self.cur
        raise PsdlSyntaxError(message, tok.line, tok.col, frozenset(expected))

    @staticmethod
    def _describe(tok: Token) -> str:
        if tok.kind in (OP, NAME, NUMBER):
            return repr(tok.value)
        return tok.kind.lower()

    @staticmethod
    def _span(tok: Token) -> Span:
        return Span(tok.line, tok.col)

    # -- grammar ----------------------------------------------------------

    def parse_program(self) -> Program:
        stmts: list[Stmt] = []
        while not self.check(EOF):
            if self.accept(NEWLINE):
                continue
            stmts.append(self.parse_statement())
        return _mark_editability(Program(tuple(stmts)))

    def parse_statement(self) -> Stmt:
        if self.check(NAME, "for"):
            return self.parse_for()
        if self.check(NAME, "if"):
            return self.parse_if()
        if self.check(NAME, "set_coordinate_frame"):
            return self.parse_frame_set()
        return self.parse_assignment()

    def parse_frame_set(self) -> FrameSet:
        tok = self.advance()
        self.expect(OP, "(")
        obj = self.parse_expr()
        self.expect(OP, ")")
        self.expect(NEWLINE)
        return FrameSet(obj, span=self._span(tok))

    def parse_assignment(self) -> Stmt:
        start = self.cur
        target = self.parse_postfix()
        self.expect(OP, "=")
        rhs = self.parse_expr()
        self.expect(NEWLINE)
        span = self._span(start)
        if isinstance(target, VarRef):
            if target.name in _KEYWORDS or target.name in BUILTINS:
                raise MalformedTargetError(
                    f"cannot assign to reserved name {target.name!r}", start.line, start.col)
            return VarAssign(target.name, rhs, span=span)
        if isinstance(target, AttrRead):
            if target.attr == "facing" and target.component is None:
                return FacingAssign(target.obj, rhs, span=span)
            if target.attr in _VECTOR_ATTRS and target.component is not None:
                return AttrAssign(target.obj, target.attr, target.component, rhs, span=span)
            raise MalformedTargetError(
                f"{target.attr!r} is not assignable"
                + ("" if target.component or target.attr not in _VECTOR_ATTRS
                   else " without a component (.x/.y/.z)"),
                start.line, start.col)
        raise MalformedTargetError(
            "assignment target must be a variable or a writable object attribute",
            start.line, start.col)

    def parse_for(self) -> For:
        tok = self.advance()
        names = [self.expect(NAME, what="loop variable").value]
        while self.accept(OP, ","):
            names.append(self.expect(NAME, what="loop variable").value)
        for n in names:
            if n in _KEYWORDS or n in BUILTINS or n in _DIRECTIONS:
                raise MalformedTargetError(f"cannot use {n!r} as a loop variable", tok.line, tok.col)
        self.expect(NAME, "in")
        iterable = self.parse_expr()
        self.expect(OP, ":")
        body = self.parse_suite()
        return For(tuple(names), iterable, body, span=self._span(tok))

    def parse_if(self) -> If:
        tok = self.advance()  # 'if' or 'elif'
        cond = self.parse_expr()
        self.expect(OP, ":")
        body = self.parse_suite()
        orelse: tuple[Stmt, ...] = ()
        if self.check(NAME, "elif"):
            orelse = (self.parse_if(),)
        elif self.accept(NAME, "else"):
            self.expect(OP, ":")
            orelse = self.parse_suite()
        return If(cond, body, orelse, span=self._span(tok))

    def parse_suite(self) -> tuple[Stmt, ...]:
        if not self.accept(NEWLINE):
            # Inline suite: a single simple statement on the same line.
            if self.check(NAME, "for") or self.check(NAME, "if"):
                self.fail("inline suites may only contain simple statements")
            return (self.parse_statement(),)
        self.expect(INDENT, what="indented block")
        stmts = [self.parse_statement()]
        while not self.check(DEDENT):
            if self.accept(NEWLINE):
                continue
            stmts.append(self.parse_statement())
        self.expect(DEDENT)
        return tuple(stmts)

    # -- expressions -------------------------------------------------------

    def parse_expr(self) -> Expr:
        expr = self.parse_additive()
        _require_complete(expr)
        return expr

    def parse_additive(self) -> Expr:
        left = self.parse_multiplicative()
        while self.check(OP, "+") or self.check(OP, "-"):
            op = self.advance()
            right = self.parse_multiplicative()
            left = BinOp(op.value, left, right, span=self._span(op))
        return left

    def parse_multiplicative(self) -> Expr:
        left = self.parse_unary()
        while self.check(OP, "*") or self.check(OP, "/"):
            op = self.advance()
            right = self.parse_unary()
            if op.value == "/" and isinstance(right, NumberLit) and right.value == 0.0:
                raise PsdlSyntaxError("division by a zero literal", op.line, op.col)
            left = BinOp(op.value, left, right, span=self._span(op))
        return left

    def parse_unary(self) -> Expr:
        if self.check(OP, "-"):
            tok = self.advance()
            operand = self.parse_unary()
            if isinstance(operand, NumberLit):
                # Fold so a signed literal is one editable constant.
                return dataclasses.replace(operand, value=-operand.value, span=self._span(tok))
            return UnaryNeg(operand, span=self._span(tok))
        return self.parse_postfix()

    def parse_postfix(self) -> Expr:
        expr = self.parse_primary()
        while True:
            if self.accept(OP, "."):
                expr = self.parse_attr(expr)
            elif self.check(OP, "["):
                tok = self.advance()
                index = self.parse_expr()
                self.expect(OP, "]")
                expr = ListIndex(expr, index, span=self._span(tok))
            else:
                return expr

    def parse_attr(self, obj: Expr) -> AttrRead:
        tok = self.expect(NAME, what="attribute name")
        attr = tok.value
        if attr in _SCALAR_ATTRS or attr == "facing":
            return AttrRead(obj, attr, None, span=self._span(tok))
        if attr in _VECTOR_ATTRS:
            component = None
            if self.accept(OP, "."):
                comp_tok = self.expect(NAME, what="component x/y/z")
                if comp_tok.value not in _COMPONENTS:
                    raise PsdlSyntaxError(
                        f"unknown component {comp_tok.value!r}",
                        comp_tok.line, comp_tok.col, frozenset(_COMPONENTS))
                component = comp_tok.value
            return AttrRead(obj, attr, component, span=self._span(tok))
        raise PsdlSyntaxError(
            f"unknown attribute {attr!r}", tok.line, tok.col,
            frozenset(_VECTOR_ATTRS + _SCALAR_ATTRS + ("facing",)))

    def parse_primary(self) -> Expr:
        tok = self.cur
        if tok.kind == NUMBER:
            self.advance()
            return NumberLit(float(tok.value), span=self._span(tok))
        if tok.kind == NAME:
            if tok.value in _DIRECTIONS:
                self.advance()
                return DirectionLit(_DIRECTIONS[tok.value], span=self._span(tok))
            if tok.value in _KEYWORDS:
                self.fail(f"unexpected keyword {tok.value!r}", {"expression"})
            self.advance()
            if self.check(OP, "("):
                if tok.value not in BUILTINS:
                    raise UnknownBuiltinError(
                        f"unknown function {tok.value!r}", tok.line, tok.col, frozenset(BUILTINS))
                self.advance()
                args: list[Expr] = []
                if not self.check(OP, ")"):
                    args.append(self.parse_expr())
                    while self.accept(OP, ","):
                        args.append(self.parse_expr())
                self.expect(OP, ")")
                return Call(tok.value, tuple(args), span=self._span(tok))
            return VarRef(tok.value, span=self._span(tok))
        if tok.kind == OP and tok.value == "(":
            self.advance()
            expr = self.parse_expr()
            self.expect(OP, ")")
            return expr
        return self.fail(f"found {self._describe(tok)}", {"expression"})


def _require_complete(expr: Expr) -> None:
    """Reject vector attribute reads used as values without a component."""
    if isinstance(expr, AttrRead) and expr.attr in _VECTOR_ATTRS and expr.component is None:
        raise PsdlSyntaxError(
            f"{expr.attr!r} needs a component (.x/.y/.z) here",
            expr.span.line, expr.span.col)
    for name in ("obj", "left", "right", "operand", "seq", "index"):
        child = getattr(expr, name, None)
        if child is not None and not isinstance(child, (str, tuple)):
            _require_complete(child)
    if isinstance(expr, Call):
        for a in expr.args:
            _require_complete(a)


def _mark_editability(program: Program) -> Program:
    """Freeze literals that would change object multiplicity.

    Numeric literals inside range(...) arguments and list index
    expressions are non-editable; every other numeric literal is a
    candidate edit site.
    """

    def mark_expr(e: Expr, frozen: bool) -> Expr:
        if isinstance(e, NumberLit):
            return dataclasses.replace(e, editable=not frozen) if e.editable == frozen else e
        if isinstance(e, (DirectionLit, VarRef)):
            return e
        if isinstance(e, AttrRead):
            return dataclasses.replace(e, obj=mark_expr(e.obj, frozen))
        if isinstance(e, BinOp):
            return dataclasses.replace(e, left=mark_expr(e.left, frozen), right=mark_expr(e.right, frozen))
        if isinstance(e, UnaryNeg):
            return dataclasses.replace(e, operand=mark_expr(e.operand, frozen))
        if isinstance(e, Call):
            freeze_args = frozen or e.func == "range"
            return dataclasses.replace(e, args=tuple(mark_expr(a, freeze_args) for a in e.args))
        if isinstance(e, ListIndex):
            return dataclasses.replace(e, seq=mark_expr(e.seq, frozen), index=mark_expr(e.index, True))
        raise TypeError(f"unexpected expression node {type(e).__name__}")

    def mark_stmt(s: Stmt) -> Stmt:
        if isinstance(s, AttrAssign):
            return dataclasses.replace(s, obj=mark_expr(s.obj, False), expr=mark_expr(s.expr, False))
        if isinstance(s, FacingAssign):
            return dataclasses.replace(s, obj=mark_expr(s.obj, False), rhs=mark_expr(s.rhs, False))
        if isinstance(s, FrameSet):
            return dataclasses.replace(s, obj=mark_expr(s.obj, False))
        if isinstance(s, VarAssign):
            return dataclasses.replace(s, expr=mark_expr(s.expr, False))
        if isinstance(s, For):
            return dataclasses.replace(
                s, iterable=mark_expr(s.iterable, False), body=tuple(mark_stmt(b) for b in s.body))
        if isinstance(s, If):
            return dataclasses.replace(
                s, cond=mark_expr(s.cond, False),
                body=tuple(mark_stmt(b) for b in s.body),
                orelse=tuple(mark_stmt(b) for b in s.orelse))
        raise TypeError(f"unexpected statement node {type(s).__name__}")

    return Program(tuple(mark_stmt(s) for s in program.statements))
