"""Parser and renderer for the constructor-expression wire format.

This is the syntax of the code-completion interface: a single nested
Python-style constructor call, optionally preceded by the assignment
prefix ``formulaToFind =``.  Constructor names map onto formula nodes as

    AtomicProposition(s) -> AtomicProp      Literal("True"/"False") -> literals
    LNot -> !    LAnd -> &    LOr -> |    LImplies -> ->    LEquiv -> <->
    Next -> X    Eventually -> F    Always -> G    Until -> U
    Yesterday -> Y    Once -> O    Historically -> H    Since -> S

String arguments may be single- or double-quoted, and the whole
expression may be wrapped in markdown code fences.
"""

from __future__ import annotations

import ast
import re

from .errors import ApLexError, ConstructorSyntaxError
from .formulas import (
    And,
    AtomicProp,
    Equiv,
    Eventually,
    Formula,
    Globally,
    Historically,
    Implies,
    LiteralFalse,
    LiteralTrue,
    Next,
    Not,
    Once,
    Or,
    Since,
    Until,
    Yesterday,
)

_UNARY_CONSTRUCTORS = {
    "LNot": Not,
    "Next": Next,
    "Always": Globally,
    "Eventually": Eventually,
    "Once": Once,
    "Historically": Historically,
    "Yesterday": Yesterday,
}

_BINARY_CONSTRUCTORS = {
    "LAnd": And,
    "LOr": Or,
    "LImplies": Implies,
    "LEquiv": Equiv,
    "Since": Since,
    "Until": Until,
}

_RENDER_UNARY = {
    Not: "LNot",
    Next: "Next",
    Globally: "Always",
    Eventually: "Eventually",
    Once: "Once",
    Historically: "Historically",
    Yesterday: "Yesterday",
}

_RENDER_BINARY = {
    And: "LAnd",
    Or: "LOr",
    Implies: "LImplies",
    Equiv: "LEquiv",
    Since: "Since",
    Until: "Until",
}

_ASSIGN_PREFIX_RE = re.compile(r"\s*formulaToFind\s*=\s*")
_FENCE_RE = re.compile(r"^\s*```[a-zA-Z]*\s*$")


def strip_code_fences(text: str) -> str:
    """Drop markdown fence lines, keeping the fenced content."""
    lines = [line for line in text.splitlines() if not _FENCE_RE.match(line)]
    return "\n".join(lines)


def parse_constructor_form(text: str) -> Formula:
    """Parse one constructor expression into a Formula.

    Raises ConstructorSyntaxError for malformed nesting, unknown
    constructors, or wrong arity, and ApLexError for string arguments
    violating the atomic-proposition rule.
    """
    body = strip_code_fences(text).strip()
    body = _ASSIGN_PREFIX_RE.sub("", body, count=1)
    if not body:
        raise ConstructorSyntaxError("empty constructor expression")
    try:
        tree = ast.parse(body, mode="eval")
    except SyntaxError as exc:
        raise ConstructorSyntaxError(f"malformed expression: {exc.msg}") from exc
    return _convert(tree.body)


def _convert(node: ast.expr) -> Formula:
    if not isinstance(node, ast.Call):
        raise ConstructorSyntaxError(
            f"expected a constructor call, found {type(node).__name__}"
        )
    if not isinstance(node.func, ast.Name):
        raise ConstructorSyntaxError("constructor name must be a plain identifier")
    if node.keywords:
        raise ConstructorSyntaxError("keyword arguments are not supported")
    name = node.func.id

    if name == "AtomicProposition":
        return AtomicProp(_string_arg(node, name))
    if name == "Literal":
        value = _string_arg(node, name, validate_ap=False)
        if value == "True":
            return LiteralTrue()
        if value == "False":
            return LiteralFalse()
        raise ConstructorSyntaxError(
            f'Literal argument must be "True" or "False", got {value!r}'
        )

    ctor = _UNARY_CONSTRUCTORS.get(name)
    if ctor is not None:
        if len(node.args) != 1:
            raise ConstructorSyntaxError(
                f"{name} takes exactly 1 argument, got {len(node.args)}"
            )
        return ctor(_convert(node.args[0]))

    ctor = _BINARY_CONSTRUCTORS.get(name)
    if ctor is not None:
        if len(node.args) != 2:
            raise ConstructorSyntaxError(
                f"{name} takes exactly 2 arguments, got {len(node.args)}"
            )
        return ctor(_convert(node.args[0]), _convert(node.args[1]))

    raise ConstructorSyntaxError(f"unknown constructor {name!r}")


def _string_arg(node: ast.Call, name: str, validate_ap: bool = True) -> str:
    if len(node.args) != 1:
        raise ConstructorSyntaxError(
            f"{name} takes exactly 1 argument, got {len(node.args)}"
        )
    arg = node.args[0]
    if not isinstance(arg, ast.Constant) or not isinstance(arg.value, str):
        raise ConstructorSyntaxError(f"{name} argument must be a string literal")
    if validate_ap:
        try:
            AtomicProp(arg.value)
        except ValueError as exc:
            raise ApLexError(str(exc)) from exc
    return arg.value


def render_constructor_form(f: Formula) -> str:
    """Inverse of parse_constructor_form (up to whitespace)."""
    if isinstance(f, AtomicProp):
        return f'AtomicProposition("{f.name}")'
    if isinstance(f, LiteralTrue):
        return 'Literal("True")'
    if isinstance(f, LiteralFalse):
        return 'Literal("False")'
    name = _RENDER_UNARY.get(type(f))
    if name is not None:
        return f"{name}({render_constructor_form(f.child)})"
    name = _RENDER_BINARY.get(type(f))
    if name is not None:
        left = render_constructor_form(f.left)
        right = render_constructor_form(f.right)
        return f"{name}({left}, {right})"
    raise TypeError(f"not a formula node: {f!r}")
