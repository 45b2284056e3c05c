"""
Avaliação exata das condições de sinal escritas nas tabelas de classificação
"""

import ast
import operator
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional

from exceptions import ParseError
from family import KolmogorovParams
from poly_core import Surd


_BINARY: Dict[type, Callable] = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
}

_COMPARE: Dict[type, Callable] = {
    ast.Lt: operator.lt,
    ast.LtE: operator.le,
    ast.Gt: operator.gt,
    ast.GtE: operator.ge,
    ast.Eq: operator.eq,
    ast.NotEq: operator.ne,
}


class ParamEnvironment:
    """
    Nomes disponíveis nas condições: a0, c0, c1, c2, c3, mu, A, D, Rc, beta.

    Rc e beta são calculados sob demanda porque só existem com radicando >= 0.
    """

    def __init__(self, params: KolmogorovParams):
        self.params = params
        self._values: Dict[str, object] = {
            'a0': params.a0, 'c0': params.c0, 'c1': params.c1,
            'c2': params.c2, 'c3': params.c3, 'mu': params.mu,
            'A': params.A, 'D': params.D,
        }

    def __getitem__(self, name: str):
        if name in self._values:
            return self._values[name]
        if name == 'Rc':
            if self.params.D < 0:
                raise ParseError("Condição usa Rc com c3^2 - 4c0c2 < 0")
            value = Surd.sqrt(self.params.D)
        elif name == 'beta':
            if self.params.beta_squared < 0:
                raise ParseError("Condição usa beta com radicando negativo")
            value = Surd.sqrt(self.params.beta_squared)
        else:
            raise ParseError(f"Nome desconhecido em condição: {name}")
        self._values[name] = value
        return value


@dataclass(frozen=True)
class Condition:
    """Condição compilada a partir do texto ("-1 < mu < 0", "c2*A > 0")"""
    text: str
    tree: ast.Expression

    @classmethod
    def parse(cls, text: str) -> 'Condition':
        try:
            tree = ast.parse(text.strip(), mode='eval')
        except SyntaxError as e:
            raise ParseError(f"Condição inválida '{text}': {e}")
        if not isinstance(tree.body, ast.Compare):
            raise ParseError(f"Condição precisa ser uma comparação: '{text}'")
        return cls(text=text.strip(), tree=tree)

    def holds(self, env: ParamEnvironment) -> bool:
        return bool(_evaluate(self.tree.body, env))

    def __str__(self) -> str:
        return self.text


def _evaluate(node: ast.AST, env: ParamEnvironment):
    if isinstance(node, ast.Compare):
        left = _evaluate(node.left, env)
        for op, comparator in zip(node.ops, node.comparators):
            right = _evaluate(comparator, env)
            func = _COMPARE.get(type(op))
            if func is None:
                raise ParseError(f"Comparador não suportado: {type(op).__name__}")
            if not func(left, right):
                return False
            left = right
        return True
    if isinstance(node, ast.BinOp):
        func = _BINARY.get(type(node.op))
        if func is None:
            raise ParseError(f"Operador não suportado: {type(node.op).__name__}")
        return func(_evaluate(node.left, env), _evaluate(node.right, env))
    if isinstance(node, ast.UnaryOp):
        operand = _evaluate(node.operand, env)
        if isinstance(node.op, ast.USub):
            return -operand
        if isinstance(node.op, ast.UAdd):
            return operand
        raise ParseError(f"Operador unário não suportado: {type(node.op).__name__}")
    if isinstance(node, ast.Name):
        return env[node.id]
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) \
            and not isinstance(node.value, bool):
        return Fraction(repr(node.value)) if isinstance(node.value, float) else Fraction(node.value)
    raise ParseError(f"Elemento não suportado em condição: {ast.dump(node)}")


def compile_conditions(texts: Optional[Iterable[str]]) -> List[Condition]:
    return [Condition.parse(text) for text in (texts or [])]


def all_hold(conditions: Iterable[Condition], params_or_env) -> bool:
    """Conjunção das condições (lista vazia é verdadeira)"""
    env = params_or_env if isinstance(params_or_env, ParamEnvironment) else ParamEnvironment(params_or_env)
    return all(condition.holds(env) for condition in conditions)
