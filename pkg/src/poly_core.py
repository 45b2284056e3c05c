"""
Aritmética exata de polinômios em duas variáveis sobre os racionais
"""

import math
import re
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Tuple, Union

import numpy as np
from loguru import logger

from exceptions import NotDivisible, ParseError, ZeroPolynomial


FIRST = 0
SECOND = 1

Exponent = Tuple[int, int]
Scalar = Union[int, Fraction]


def to_rational(value) -> Fraction:
    """
    Converte um valor de entrada em racional exato

    Args:
        value: int, Fraction, Decimal, float ou texto ("3/2", "-0.25")

    Returns:
        Fraction equivalente; decimais viram denominadores em base 10
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ParseError(f"Valor booleano não é parâmetro: {value}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Decimal):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ParseError(f"Valor não finito: {value}")
        # repr devolve o menor decimal que reproduz o float
        return Fraction(repr(value))
    if isinstance(value, str):
        text = value.strip().replace(' ', '')
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as e:
            raise ParseError(f"Racional inválido '{value}': {e}")
    raise ParseError(f"Tipo não suportado para racional: {type(value).__name__}")


def _rational_sqrt(value: Fraction) -> Optional[Fraction]:
    """Raiz quadrada exata quando numerador e denominador são quadrados"""
    if value < 0:
        return None
    num_root = math.isqrt(value.numerator)
    den_root = math.isqrt(value.denominator)
    if num_root * num_root == value.numerator and den_root * den_root == value.denominator:
        return Fraction(num_root, den_root)
    return None


class Surd:
    """
    Número exato da forma a + b*sqrt(d) com a, b, d racionais e d >= 0.

    Usado para as coordenadas de P1, P2 (que dependem de R_c) e para as
    condições das tabelas que envolvem R_c ou beta, sem decidir sinais em
    ponto flutuante.
    """

    __slots__ = ('a', 'b', 'd')

    def __init__(self, a: Scalar = 0, b: Scalar = 0, d: Scalar = 0):
        a, b, d = Fraction(a), Fraction(b), Fraction(d)
        if d < 0:
            raise ValueError(f"Radicando negativo: {d}")
        if b == 0 or d == 0:
            b, d = Fraction(0), Fraction(0)
        else:
            root = _rational_sqrt(d)
            if root is not None:
                a, b, d = a + b * root, Fraction(0), Fraction(0)
        self.a = a
        self.b = b
        self.d = d

    @classmethod
    def sqrt(cls, d: Scalar) -> 'Surd':
        """Raiz quadrada exata de um racional não negativo"""
        return cls(0, 1, d)

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def rational(self) -> Fraction:
        """Valor racional; erro se houver parte irracional"""
        if self.b != 0:
            raise ValueError(f"{self} não é racional")
        return self.a

    @staticmethod
    def _coerce(other) -> Optional['Surd']:
        if isinstance(other, Surd):
            return other
        if isinstance(other, (int, Fraction)):
            return Surd(other)
        return None

    def _radicand_with(self, other: 'Surd') -> Fraction:
        if self.b == 0:
            return other.d
        if other.b == 0 or self.d == other.d:
            return self.d
        raise ValueError(f"Radicandos incompatíveis: {self.d} e {other.d}")

    def sign(self) -> int:
        """Sinal exato comparando quadrados"""
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        lhs = self.a * self.a
        rhs = self.b * self.b * self.d
        if lhs > rhs:
            return sa
        if lhs < rhs:
            return sb
        return 0

    def __add__(self, other):
        if isinstance(other, float):
            return float(self) + other
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        d = self._radicand_with(o)
        return Surd(self.a + o.a, self.b + o.b, d)

    __radd__ = __add__

    def __neg__(self):
        return Surd(-self.a, -self.b, self.d)

    def __sub__(self, other):
        if isinstance(other, float):
            return float(self) - other
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, float):
            return float(self) * other
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        d = self._radicand_with(o)
        return Surd(self.a * o.a + self.b * o.b * d, self.a * o.b + self.b * o.a, d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, float):
            return float(self) / other
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        norm = o.a * o.a - o.b * o.b * o.d
        if norm == 0:
            raise ZeroDivisionError("Divisão por zero em Surd")
        conj = Surd(o.a / norm, -o.b / norm, o.d)
        return self * conj

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        result = Surd(1)
        for _ in range(n):
            result = result * self
        return result

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * math.sqrt(float(self.d))

    def __bool__(self) -> bool:
        return self.sign() != 0

    def __eq__(self, other) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        try:
            return (self - o).sign() == 0
        except ValueError:
            return False

    def __lt__(self, other) -> bool:
        return (self - other).sign() < 0

    def __le__(self, other) -> bool:
        return (self - other).sign() <= 0

    def __gt__(self, other) -> bool:
        return (self - other).sign() > 0

    def __ge__(self, other) -> bool:
        return (self - other).sign() >= 0

    def __hash__(self) -> int:
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __repr__(self) -> str:
        if self.b == 0:
            return f"Surd({self.a})"
        return f"Surd({self.a} + {self.b}*sqrt({self.d}))"

    def __str__(self) -> str:
        if self.b == 0:
            return str(self.a)
        return f"{self.a} + {self.b}*sqrt({self.d})"


ExactNumber = Union[int, Fraction, Surd]


def sign(value) -> int:
    """Sinal de Fraction, int, float ou Surd"""
    if isinstance(value, Surd):
        return value.sign()
    return (value > 0) - (value < 0)


def is_exact(value) -> bool:
    return isinstance(value, (int, Fraction, Surd)) and not isinstance(value, bool)


def _power(base, n: int):
    # multiplicações repetidas: (-x)^n == -(x^n) bit a bit em ponto flutuante
    result = base
    for _ in range(n - 1):
        result = result * base
    return result


class Poly2:
    """
    Polinômio esparso em duas variáveis com coeficientes racionais exatos.

    Os termos são um mapa (i, j) -> coeficiente, sem coeficientes nulos
    armazenados. Instâncias são imutáveis.
    """

    __slots__ = ('_terms', '_float_terms')

    def __init__(self, terms: Optional[Dict[Exponent, Scalar]] = None):
        clean: Dict[Exponent, Fraction] = {}
        for (i, j), coef in (terms or {}).items():
            if i < 0 or j < 0:
                raise ValueError(f"Expoente negativo: {(i, j)}")
            coef = Fraction(coef)
            if coef != 0:
                clean[(int(i), int(j))] = coef
        self._terms = clean
        self._float_terms = tuple(
            (float(c), i, j) for (i, j), c in sorted(clean.items())
        )

    @classmethod
    def constant(cls, value: Scalar) -> 'Poly2':
        return cls({(0, 0): value})

    @classmethod
    def monomial(cls, coef: Scalar, i: int, j: int) -> 'Poly2':
        return cls({(i, j): coef})

    @classmethod
    def variable(cls, var: int) -> 'Poly2':
        return cls({(1, 0): 1}) if var == FIRST else cls({(0, 1): 1})

    @property
    def terms(self) -> Dict[Exponent, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def coeff(self, i: int, j: int) -> Fraction:
        return self._terms.get((i, j), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    @property
    def degree(self) -> int:
        """Grau total; -1 para o polinômio nulo"""
        if not self._terms:
            return -1
        return max(i + j for i, j in self._terms)

    @property
    def lowest_degree(self) -> int:
        if not self._terms:
            return -1
        return min(i + j for i, j in self._terms)

    @staticmethod
    def _lift(other) -> Optional['Poly2']:
        if isinstance(other, Poly2):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return Poly2.constant(other)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        terms = dict(self._terms)
        for key, coef in o._terms.items():
            terms[key] = terms.get(key, Fraction(0)) + coef
        return Poly2(terms)

    __radd__ = __add__

    def __neg__(self):
        return Poly2({key: -coef for key, coef in self._terms.items()})

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        terms: Dict[Exponent, Fraction] = {}
        for (i1, j1), c1 in self._terms.items():
            for (i2, j2), c2 in o._terms.items():
                key = (i1 + i2, j1 + j2)
                terms[key] = terms.get(key, Fraction(0)) + c1 * c2
        return Poly2(terms)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        result = Poly2.constant(1)
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other) -> bool:
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self._terms == o._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def evaluate(self, x: float, y: float) -> float:
        """Avaliação em ponto flutuante, termo a termo em ordem fixa"""
        total = 0.0
        for coef, i, j in self._float_terms:
            term = coef
            if i:
                term = term * _power(x, i)
            if j:
                term = term * _power(y, j)
            total += term
        return total

    def evaluate_exact(self, x: ExactNumber, y: ExactNumber):
        """Avaliação exata em racionais ou Surd"""
        total = Fraction(0)
        for (i, j), coef in sorted(self._terms.items()):
            term = coef
            if i:
                term = term * _power(x, i)
            if j:
                term = term * _power(y, j)
            total = total + term
        return total

    def homogeneous_part(self, k: int) -> 'Poly2':
        return Poly2({(i, j): c for (i, j), c in self._terms.items() if i + j == k})

    def format(self, var_names: Tuple[str, str] = ('x', 'y')) -> str:
        if not self._terms:
            return "0"
        pieces = []
        ordered = sorted(self._terms.items(), key=lambda kv: (kv[0][0] + kv[0][1], kv[0]))
        for (i, j), coef in ordered:
            factors = []
            if i:
                factors.append(var_names[0] if i == 1 else f"{var_names[0]}^{i}")
            if j:
                factors.append(var_names[1] if j == 1 else f"{var_names[1]}^{j}")
            magnitude = abs(coef)
            if factors and magnitude == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(magnitude)] + factors)
            pieces.append(("-" if coef < 0 else "+", body))
        first_sign, first_body = pieces[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sgn, body in pieces[1:]:
            text += f" {sgn} {body}"
        return text

    def __repr__(self) -> str:
        return f"Poly2({self.format()})"


def poly_eval(f: Poly2, pt) -> Union[float, Fraction, Surd]:
    """
    Avalia f no ponto

    Args:
        f: polinômio
        pt: par de coordenadas; racionais/Surd dão resultado exato

    Returns:
        Valor exato quando o ponto é exato, float caso contrário
    """
    x, y = pt
    if is_exact(x) and is_exact(y):
        return f.evaluate_exact(x, y)
    return f.evaluate(float(x), float(y))


def poly_diff(f: Poly2, var: int) -> Poly2:
    """Derivada parcial formal em relação à variável indicada"""
    terms: Dict[Exponent, Fraction] = {}
    for (i, j), coef in f.items():
        if var == FIRST and i > 0:
            terms[(i - 1, j)] = coef * i
        elif var == SECOND and j > 0:
            terms[(i, j - 1)] = coef * j
    return Poly2(terms)


def leading_homogeneous_part(f: Poly2) -> Tuple[int, Poly2]:
    """
    Parte homogênea de menor grau

    Returns:
        (m, f_m) com m o menor grau total presente
    """
    if f.is_zero():
        raise ZeroPolynomial("Polinômio nulo não tem parte homogênea de menor grau")
    m = f.lowest_degree
    return m, f.homogeneous_part(m)


def exact_div_by_power(f: Poly2, var: int, k: int) -> Poly2:
    """Divide f por var^k; NotDivisible se algum termo não comportar"""
    terms: Dict[Exponent, Fraction] = {}
    for (i, j), coef in f.items():
        exponent = i if var == FIRST else j
        if exponent < k:
            raise NotDivisible(f"Termo {(i, j)} não é divisível pela potência {k}")
        terms[(i - k, j) if var == FIRST else (i, j - k)] = coef
    return Poly2(terms)


def poly_compose_substitute(f: Poly2, sub_first: Poly2, sub_second: Poly2) -> Poly2:
    """Composição exata f(sub_first, sub_second)"""
    powers_first: Dict[int, Poly2] = {0: Poly2.constant(1)}
    powers_second: Dict[int, Poly2] = {0: Poly2.constant(1)}

    def power_of(cache: Dict[int, Poly2], base: Poly2, n: int) -> Poly2:
        if n not in cache:
            cache[n] = power_of(cache, base, n - 1) * base
        return cache[n]

    result = Poly2()
    for (i, j), coef in f.items():
        term = power_of(powers_first, sub_first, i) * power_of(powers_second, sub_second, j)
        result = result + term * coef
    return result


def axis_restriction(f: Poly2, fixed_var: int) -> List[Fraction]:
    """
    Coeficientes do polinômio univariado obtido fixando fixed_var = 0

    Returns:
        Lista em que a posição k é o coeficiente da outra variável na potência k
    """
    coeffs: Dict[int, Fraction] = {}
    for (i, j), coef in f.items():
        if fixed_var == FIRST and i == 0:
            coeffs[j] = coef
        elif fixed_var == SECOND and j == 0:
            coeffs[i] = coef
    if not coeffs:
        return []
    top = max(coeffs)
    return [coeffs.get(k, Fraction(0)) for k in range(top + 1)]


def _trim(coeffs: List[Fraction]) -> List[Fraction]:
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def _divisors(n: int) -> List[int]:
    n = abs(n)
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def _deflate(coeffs: List[Fraction], root: Fraction) -> List[Fraction]:
    # divisão sintética pelo fator (t - root), coeficientes em ordem crescente
    top = len(coeffs) - 1
    quotient = [Fraction(0)] * top
    carry = Fraction(0)
    for k in range(top, 0, -1):
        carry = coeffs[k] + carry * root
        quotient[k - 1] = carry
    return quotient


def _rational_root(coeffs: List[Fraction]) -> Optional[Fraction]:
    lcm = 1
    for c in coeffs:
        lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
    ints = [int(c * lcm) for c in coeffs]
    constant, leading = ints[0], ints[-1]
    if constant == 0:
        return Fraction(0)
    if abs(constant) > 10**6 or abs(leading) > 10**6:
        return None
    for p in _divisors(constant):
        for q in _divisors(leading):
            for candidate in (Fraction(p, q), Fraction(-p, q)):
                value = Fraction(0)
                for c in reversed(coeffs):
                    value = value * candidate + c
                if value == 0:
                    return candidate
    return None


def univariate_real_roots(coeffs: Iterable[Scalar]) -> List[Tuple[Union[Fraction, Surd, float], int]]:
    """
    Raízes reais de um polinômio univariado com multiplicidades

    Args:
        coeffs: coeficientes em ordem crescente de potência

    Returns:
        Lista (raiz, multiplicidade) ordenada pelo valor; raízes exatas
        (Fraction ou Surd) sempre que possível, float só no último recurso
    """
    work = _trim([Fraction(c) for c in coeffs])
    if not work:
        raise ZeroPolynomial("Polinômio univariado nulo tem infinitas raízes")

    found: Dict[object, int] = {}

    def record(root, mult: int = 1):
        for key in found:
            if isinstance(key, float) or isinstance(root, float):
                if abs(float(key) - float(root)) < 1e-12:
                    found[key] += mult
                    return
            elif key == root:
                found[key] += mult
                return
        found[root] = mult

    while len(work) > 1 and work[0] == 0:
        record(Fraction(0))
        work = work[1:]

    while len(work) > 3:
        root = _rational_root(work)
        if root is None:
            break
        record(root)
        work = _deflate(work, root)

    degree = len(work) - 1
    if degree == 1:
        record(-work[0] / work[1])
    elif degree == 2:
        c, b, a = work
        disc = b * b - 4 * a * c
        if disc == 0:
            record(-b / (2 * a), 2)
        elif disc > 0:
            record(Surd(-b / (2 * a), Fraction(-1) / (2 * a), disc))
            record(Surd(-b / (2 * a), Fraction(1) / (2 * a), disc))
    elif degree >= 3:
        logger.debug(f"Raízes numéricas para polinômio de grau {degree}")
        numeric = np.roots([float(c) for c in reversed(work)])
        for value in numeric:
            if abs(value.imag) < 1e-10:
                record(float(value.real))

    return sorted(found.items(), key=lambda kv: float(kv[0]))


@dataclass(frozen=True)
class PlanarSystem:
    """Sistema planar polinomial x' = p(x, y), y' = q(x, y)"""
    p: Poly2
    q: Poly2
    var_names: Tuple[str, str] = ('x', 'y')

    def __post_init__(self):
        if self.p.is_zero() and self.q.is_zero():
            raise ZeroPolynomial("Sistema identicamente nulo")

    @property
    def degree(self) -> int:
        return max(self.p.degree, self.q.degree)

    def evaluate(self, x: float, y: float) -> Tuple[float, float]:
        return self.p.evaluate(x, y), self.q.evaluate(x, y)

    def jacobian(self, pt) -> List[List]:
        """Matriz jacobiana no ponto; exata se o ponto for exato"""
        return [
            [poly_eval(poly_diff(self.p, FIRST), pt), poly_eval(poly_diff(self.p, SECOND), pt)],
            [poly_eval(poly_diff(self.q, FIRST), pt), poly_eval(poly_diff(self.q, SECOND), pt)],
        ]

    def scaled(self, factor: Scalar) -> 'PlanarSystem':
        return PlanarSystem(self.p * Fraction(factor), self.q * Fraction(factor), self.var_names)

    def substitute(self, sub_first: Poly2, sub_second: Poly2) -> 'PlanarSystem':
        """Compõe as duas componentes com a mesma substituição"""
        return PlanarSystem(
            poly_compose_substitute(self.p, sub_first, sub_second),
            poly_compose_substitute(self.q, sub_first, sub_second),
            self.var_names,
        )

    def format(self) -> str:
        a, b = self.var_names
        return f"{a}' = {self.p.format(self.var_names)}\n{b}' = {self.q.format(self.var_names)}"


_FACTOR_RE = re.compile(r'^([A-Za-z_][A-Za-z_0-9]*)(?:\^(\d+))?$')


def parse_poly(text: str, var_names: Tuple[str, str] = ('x', 'y')) -> Poly2:
    """
    Lê polinômios no formato "-2/3*x^2*z + 5*z - 1"

    Args:
        text: termos separados por + ou -, fatores por *
        var_names: nomes das duas variáveis do contexto

    Returns:
        Poly2 correspondente
    """
    compact = text.replace(' ', '').replace('\t', '')
    if not compact:
        raise ParseError("Polinômio vazio")
    if compact[0] not in '+-':
        compact = '+' + compact
    pieces = re.findall(r'[+-][^+-]+', compact)
    if ''.join(pieces) != compact:
        raise ParseError(f"Polinômio mal formado: '{text}'")

    result = Poly2()
    for piece in pieces:
        coef = Fraction(-1 if piece[0] == '-' else 1)
        exponents = [0, 0]
        for factor in piece[1:].split('*'):
            if not factor:
                raise ParseError(f"Fator vazio em '{text}'")
            match = _FACTOR_RE.match(factor)
            if match:
                name, power = match.group(1), int(match.group(2) or 1)
                if name not in var_names:
                    raise ParseError(f"Variável desconhecida '{name}' (esperado {var_names})")
                exponents[var_names.index(name)] += power
            else:
                coef *= to_rational(factor)
        result = result + Poly2.monomial(coef, exponents[0], exponents[1])
    return result
