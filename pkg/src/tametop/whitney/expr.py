"""Expr Module.

Differentiable expression trees for chart coordinates. Text is read with sympy's parser
and converted into the small node set below, which evaluates with plain floats or with
`Dual` numbers carrying a gradient (forward-mode differentiation).

Supported: variables, constants, ``+ - * /``, integer powers, ``exp``, ``sin``, ``cos``.
"""

import math
from dataclasses import dataclass
from tokenize import TokenError
from typing import Iterable, Mapping

import numpy as np
import sympy
from sympy.parsing.sympy_parser import parse_expr

from tametop.exceptions import InputSyntaxError


class ExprSyntaxError(InputSyntaxError):
    """Raised when a chart expression cannot be read or uses unsupported operations."""


@dataclass(frozen=True, eq=False)
class Dual:
    """A value with its gradient with respect to the seeded variables."""

    value: float
    grad: np.ndarray

    def __add__(self, other: "Dual") -> "Dual":
        return Dual(self.value + other.value, self.grad + other.grad)

    def __sub__(self, other: "Dual") -> "Dual":
        return Dual(self.value - other.value, self.grad - other.grad)

    def __mul__(self, other: "Dual") -> "Dual":
        return Dual(self.value * other.value, self.grad * other.value + other.grad * self.value)

    def __truediv__(self, other: "Dual") -> "Dual":
        value = self.value / other.value
        return Dual(value, (self.grad - other.grad * value) / other.value)

    def __neg__(self) -> "Dual":
        return Dual(-self.value, -self.grad)


class Expr:
    """Base class of expression nodes."""

    def evaluate(self, env: Mapping[str, float]) -> float:
        """Value at a point given by variable name."""
        raise NotImplementedError

    def dual(self, env: Mapping[str, Dual], width: int) -> Dual:
        """Value and gradient; ``width`` is the gradient length."""
        raise NotImplementedError

    def variables(self) -> set:
        """Names of the variables used."""
        return set()


@dataclass(frozen=True)
class Const(Expr):
    value: float

    def evaluate(self, env: Mapping[str, float]) -> float:
        return self.value

    def dual(self, env: Mapping[str, Dual], width: int) -> Dual:
        return Dual(self.value, np.zeros(width))

    def __str__(self) -> str:
        return repr(self.value)


@dataclass(frozen=True)
class Var(Expr):
    name: str

    def evaluate(self, env: Mapping[str, float]) -> float:
        return float(env[self.name])

    def dual(self, env: Mapping[str, Dual], width: int) -> Dual:
        return env[self.name]

    def variables(self) -> set:
        return {self.name}

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Binary(Expr):
    left: Expr
    right: Expr

    def variables(self) -> set:
        return self.left.variables() | self.right.variables()


class Add(Binary):
    def evaluate(self, env: Mapping[str, float]) -> float:
        return self.left.evaluate(env) + self.right.evaluate(env)

    def dual(self, env: Mapping[str, Dual], width: int) -> Dual:
        return self.left.dual(env, width) + self.right.dual(env, width)

    def __str__(self) -> str:
        return f"({self.left} + {self.right})"


class Sub(Binary):
    def evaluate(self, env: Mapping[str, float]) -> float:
        return self.left.evaluate(env) - self.right.evaluate(env)

    def dual(self, env: Mapping[str, Dual], width: int) -> Dual:
        return self.left.dual(env, width) - self.right.dual(env, width)

    def __str__(self) -> str:
        return f"({self.left} - {self.right})"


class Mul(Binary):
    def evaluate(self, env: Mapping[str, float]) -> float:
        return self.left.evaluate(env) * self.right.evaluate(env)

    def dual(self, env: Mapping[str, Dual], width: int) -> Dual:
        return self.left.dual(env, width) * self.right.dual(env, width)

    def __str__(self) -> str:
        return f"({self.left} * {self.right})"


class Div(Binary):
    def evaluate(self, env: Mapping[str, float]) -> float:
        return self.left.evaluate(env) / self.right.evaluate(env)

    def dual(self, env: Mapping[str, Dual], width: int) -> Dual:
        return self.left.dual(env, width) / self.right.dual(env, width)

    def __str__(self) -> str:
        return f"({self.left} / {self.right})"


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: int

    def evaluate(self, env: Mapping[str, float]) -> float:
        return self.base.evaluate(env) ** self.exponent

    def dual(self, env: Mapping[str, Dual], width: int) -> Dual:
        inner = self.base.dual(env, width)
        if self.exponent == 0:
            return Dual(1.0, np.zeros(width))
        value = inner.value**self.exponent
        slope = self.exponent * inner.value ** (self.exponent - 1)
        return Dual(value, inner.grad * slope)

    def variables(self) -> set:
        return self.base.variables()

    def __str__(self) -> str:
        return f"{self.base}**{self.exponent}"


@dataclass(frozen=True)
class Neg(Expr):
    operand: Expr

    def evaluate(self, env: Mapping[str, float]) -> float:
        return -self.operand.evaluate(env)

    def dual(self, env: Mapping[str, Dual], width: int) -> Dual:
        return -self.operand.dual(env, width)

    def variables(self) -> set:
        return self.operand.variables()

    def __str__(self) -> str:
        return f"-{self.operand}"


@dataclass(frozen=True)
class Unary(Expr):
    operand: Expr

    name = ""

    def _value(self, x: float) -> float:
        raise NotImplementedError

    def _slope(self, x: float) -> float:
        raise NotImplementedError

    def evaluate(self, env: Mapping[str, float]) -> float:
        return self._value(self.operand.evaluate(env))

    def dual(self, env: Mapping[str, Dual], width: int) -> Dual:
        inner = self.operand.dual(env, width)
        return Dual(self._value(inner.value), inner.grad * self._slope(inner.value))

    def variables(self) -> set:
        return self.operand.variables()

    def __str__(self) -> str:
        return f"{self.name}({self.operand})"


class Exp(Unary):
    name = "exp"

    def _value(self, x: float) -> float:
        return math.exp(x)

    def _slope(self, x: float) -> float:
        return math.exp(x)


class Sin(Unary):
    name = "sin"

    def _value(self, x: float) -> float:
        return math.sin(x)

    def _slope(self, x: float) -> float:
        return math.cos(x)


class Cos(Unary):
    name = "cos"

    def _value(self, x: float) -> float:
        return math.cos(x)

    def _slope(self, x: float) -> float:
        return -math.sin(x)


_FUNCTIONS = {sympy.exp: Exp, sympy.sin: Sin, sympy.cos: Cos}


def _fold(cls: type, parts: list[Expr]) -> Expr:
    result = parts[0]
    for part in parts[1:]:
        result = cls(result, part)
    return result


def from_sympy(node: sympy.Basic, text: str = "") -> Expr:
    """Converts a sympy expression into an `Expr` tree.

    Raises:
        ExprSyntaxError: For operations outside the supported set.
    """
    if isinstance(node, sympy.Symbol):
        return Var(node.name)
    if node.is_Number or isinstance(node, sympy.NumberSymbol):
        return Const(float(node))
    if isinstance(node, sympy.Add):
        return _fold(Add, [from_sympy(arg, text) for arg in node.args])
    if isinstance(node, sympy.Mul):
        args = list(node.args)
        if args[0] == sympy.S.NegativeOne:
            return Neg(_fold(Mul, [from_sympy(arg, text) for arg in args[1:]]))
        return _fold(Mul, [from_sympy(arg, text) for arg in args])
    if isinstance(node, sympy.Pow):
        base, exponent = node.args
        if not exponent.is_Integer:
            raise ExprSyntaxError(f"only integer powers are supported, got {node}", 0)
        if int(exponent) < 0:
            return Div(Const(1.0), Pow(from_sympy(base, text), -int(exponent)))
        return Pow(from_sympy(base, text), int(exponent))
    for function, cls in _FUNCTIONS.items():
        if isinstance(node, function):
            return cls(from_sympy(node.args[0], text))
    raise ExprSyntaxError(f"unsupported operation {type(node).__name__} in {text!r}", 0)


def parse_expression(text: str, variables: Iterable[str]) -> Expr:
    """Reads an expression over the given variable names.

    Args:
        text (str): Expression such as ``"exp(-t*x)"``.
        variables: Allowed variable names.

    Returns:
        Expr: The tree.

    Raises:
        ExprSyntaxError: With the parser position when available.
    """
    names = list(variables)
    local = {name: sympy.Symbol(name) for name in names}
    local.update({"exp": sympy.exp, "sin": sympy.sin, "cos": sympy.cos})
    try:
        parsed = parse_expr(text, local_dict=local)
    except SyntaxError as exc:
        position = max((exc.offset or 1) - 1, 0)
        raise ExprSyntaxError(f"cannot parse {text!r}: {exc.msg}", position) from exc
    except (TokenError, TypeError, NameError, ValueError, AttributeError) as exc:
        raise ExprSyntaxError(f"cannot parse {text!r}: {exc}", 0) from exc
    if not isinstance(parsed, sympy.Basic):
        parsed = sympy.sympify(parsed)
    unknown = sorted(symbol.name for symbol in parsed.free_symbols if symbol.name not in names)
    if unknown:
        raise ExprSyntaxError(f"unknown variables {unknown} in {text!r}", 0)
    return from_sympy(parsed, text)
