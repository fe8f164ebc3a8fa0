import ast
import math
import re
from typing import Any, Callable, Dict

from .errors import ConfigError

_FUNCTIONS: Dict[str, Callable[..., float]] = {
    "ceil": math.ceil,
    "floor": math.floor,
    "log": math.log,
    "sqrt": math.sqrt,
    "min": min,
    "max": max,
}

_CONSTANTS = {"e": math.e, "pi": math.pi}

_BINARY = {
    ast.Add: lambda a, b: a + b,
    ast.Sub: lambda a, b: a - b,
    ast.Mult: lambda a, b: a * b,
    ast.Div: lambda a, b: a / b,
    ast.Pow: lambda a, b: a ** b,
}

# 2r -> 2*r, 2(q) -> 2*(q), )( -> )*(; scientific literals are kept
_IMPLICIT_PRODUCT = re.compile(
    r"(\d)(?![eE][+-]?\d)(?=[a-zA-Z(])|(\))(?=[\w(])"
)


def _normalize(text: str) -> str:
    text = text.replace("^", "**").replace("{", "(").replace("}", ")")
    return _IMPLICIT_PRODUCT.sub(
        lambda m: (m.group(1) or m.group(2)) + "*", text
    )


class HRule:
    """Interval length rule ``H(q, r)`` written as an arithmetic expression.

    The expression may use ``q``, ``r``, ``e``, ``pi``, ``+ - * / ^ **``,
    braces for grouping and ``ceil``, ``floor``, ``log``, ``sqrt``,
    ``min``, ``max``. The value is rounded up and clamped to ``[1, q]``.

    .. code-block:: python

        rule = HRule("q^{1/(2r)+0.3}")
        rule(10 ** 4, 2)  # ceil(10^{4 * 0.55}) = 159

    Args:
        text: the expression.

    """

    _text: str
    _tree: ast.Expression

    def __init__(self, text: str):
        self._text = text
        try:
            tree = ast.parse(_normalize(text), mode="eval")
        except SyntaxError as e:
            raise ConfigError("invalid H rule %r: %s" % (text, e.msg))
        self._check(tree.body)
        self._tree = tree

    def _check(self, node: ast.AST) -> None:
        if isinstance(node, ast.BinOp):
            if type(node.op) not in _BINARY:
                raise ConfigError("operator not allowed in %r." % self._text)
            self._check(node.left)
            self._check(node.right)
        elif isinstance(node, ast.UnaryOp):
            if not isinstance(node.op, (ast.USub, ast.UAdd)):
                raise ConfigError("operator not allowed in %r." % self._text)
            self._check(node.operand)
        elif isinstance(node, ast.Call):
            func = node.func
            if not (isinstance(func, ast.Name) and func.id in _FUNCTIONS):
                raise ConfigError("function not allowed in %r." % self._text)
            if node.keywords or not node.args:
                raise ConfigError("bad call in %r." % self._text)
            for arg in node.args:
                self._check(arg)
        elif isinstance(node, ast.Name):
            if node.id not in ("q", "r") and node.id not in _CONSTANTS:
                raise ConfigError(
                    "unknown name %s in %r." % (node.id, self._text)
                )
        elif isinstance(node, ast.Constant):
            if not isinstance(node.value, (int, float)) or isinstance(
                node.value, bool
            ):
                raise ConfigError("bad literal in %r." % self._text)
        else:
            raise ConfigError("unsupported syntax in %r." % self._text)

    def _evaluate(self, node: ast.AST, env: Dict[str, float]) -> Any:
        if isinstance(node, ast.BinOp):
            op = _BINARY[type(node.op)]
            left = self._evaluate(node.left, env)
            return op(left, self._evaluate(node.right, env))
        if isinstance(node, ast.UnaryOp):
            value = self._evaluate(node.operand, env)
            return -value if isinstance(node.op, ast.USub) else value
        if isinstance(node, ast.Call):
            assert isinstance(node.func, ast.Name)
            args = [self._evaluate(arg, env) for arg in node.args]
            return _FUNCTIONS[node.func.id](*args)
        if isinstance(node, ast.Name):
            return env[node.id]
        assert isinstance(node, ast.Constant)
        return node.value

    def value(self, q: int, r: int) -> float:
        """Returns the raw value of the expression."""
        env: Dict[str, float] = {"q": q, "r": r}
        env.update(_CONSTANTS)
        try:
            result = float(self._evaluate(self._tree.body, env))
        except (ArithmeticError, ValueError) as e:
            raise ConfigError(
                "H rule %r failed at q=%d: %s" % (self._text, q, e)
            )
        if not math.isfinite(result):
            raise ConfigError(
                "H rule %r is not finite at q=%d." % (self._text, q)
            )
        return result

    def __call__(self, q: int, r: int) -> int:
        # rounding absorbs float noise on exact integer values
        H = math.ceil(round(self.value(q, r), 9))
        return min(max(H, 1), q)

    @property
    def text(self) -> str:
        return self._text

    def __repr__(self) -> str:
        return "HRule(%r)" % self._text
