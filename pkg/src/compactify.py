"""
Compactificação de Poincaré: cartas locais, pontos no infinito e disco de Poincaré
"""

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Tuple

from loguru import logger

from exceptions import InfinitelyManyInfinite, ZeroPolynomial
from poly_core import (
    FIRST, SECOND, PlanarSystem, Poly2, axis_restriction, univariate_real_roots,
)


class ChartId(Enum):
    U1 = "U1"
    U2 = "U2"
    U3 = "U3"
    V1 = "V1"
    V2 = "V2"
    V3 = "V3"

    @property
    def base(self) -> 'ChartId':
        """Carta U correspondente"""
        return ChartId("U" + self.value[1])

    @property
    def is_antipodal(self) -> bool:
        return self.value.startswith("V")


@dataclass(frozen=True)
class ChartSystem:
    """Expressão polinomial do campo compactificado numa carta"""
    chart: ChartId
    system: PlanarSystem
    degree_of_original: int


@dataclass(frozen=True)
class DiscPoint:
    """Ponto do disco de Poincaré"""
    x_disc: float
    y_disc: float

    @property
    def radius(self) -> float:
        return math.hypot(self.x_disc, self.y_disc)

    @property
    def is_at_infinity(self) -> bool:
        return abs(self.radius - 1.0) < 1e-12


def _u1_terms(sys: PlanarSystem, d: int) -> Tuple[Dict, Dict]:
    # termo c x^i y^j: em U1 vira c u^j v^(d-i-j) (já multiplicado por v^d)
    u_dot: Dict[Tuple[int, int], Fraction] = {}
    v_dot: Dict[Tuple[int, int], Fraction] = {}
    for (i, j), c in sys.q.items():
        key = (j, d - i - j)
        u_dot[key] = u_dot.get(key, Fraction(0)) + c
    for (i, j), c in sys.p.items():
        key = (j + 1, d - i - j)
        u_dot[key] = u_dot.get(key, Fraction(0)) - c
        key = (j, d + 1 - i - j)
        v_dot[key] = v_dot.get(key, Fraction(0)) - c
    return u_dot, v_dot


def _u2_terms(sys: PlanarSystem, d: int) -> Tuple[Dict, Dict]:
    # termo c x^i y^j: em U2 vira c u^i v^(d-i-j)
    u_dot: Dict[Tuple[int, int], Fraction] = {}
    v_dot: Dict[Tuple[int, int], Fraction] = {}
    for (i, j), c in sys.p.items():
        key = (i, d - i - j)
        u_dot[key] = u_dot.get(key, Fraction(0)) + c
    for (i, j), c in sys.q.items():
        key = (i + 1, d - i - j)
        u_dot[key] = u_dot.get(key, Fraction(0)) - c
        key = (i, d + 1 - i - j)
        v_dot[key] = v_dot.get(key, Fraction(0)) - c
    return u_dot, v_dot


def to_chart(sys: PlanarSystem, chart: ChartId) -> ChartSystem:
    """
    Expressão do campo compactificado na carta pedida

    Args:
        sys: sistema planar polinomial
        chart: U1, U2, U3 ou as antipodais V1, V2, V3

    Returns:
        ChartSystem nas variáveis (u, v); as cartas V são as U vezes (-1)^(d-1)
    """
    d = sys.degree
    base = chart.base
    if base is ChartId.U3:
        system = PlanarSystem(sys.p, sys.q, ('u', 'v'))
    else:
        u_terms, v_terms = _u1_terms(sys, d) if base is ChartId.U1 else _u2_terms(sys, d)
        system = PlanarSystem(Poly2(u_terms), Poly2(v_terms), ('u', 'v'))
    if chart.is_antipodal and (d - 1) % 2 == 1:
        system = system.scaled(-1)
    return ChartSystem(chart=chart, system=system, degree_of_original=d)


def infinite_singular_points(sys: PlanarSystem) -> List[Tuple[ChartId, Tuple[object, object]]]:
    """
    Pontos singulares no equador, armazenados sem antípodas

    Returns:
        Lista (carta, coordenadas): raízes de u' restrito a v = 0 em U1 e,
        quando singular, a origem de U2
    """
    u1 = to_chart(sys, ChartId.U1).system
    restriction = axis_restriction(u1.p, SECOND)
    if not any(c != 0 for c in restriction):
        raise InfinitelyManyInfinite("u' se anula em todo o equador")

    points: List[Tuple[ChartId, Tuple[object, object]]] = []
    for root, multiplicity in univariate_real_roots(restriction):
        logger.debug(f"Ponto infinito em U1: u={root} (multiplicidade {multiplicity})")
        points.append((ChartId.U1, (root, Fraction(0))))

    u2 = to_chart(sys, ChartId.U2).system
    if u2.p.coeff(0, 0) == 0 and u2.q.coeff(0, 0) == 0:
        points.append((ChartId.U2, (Fraction(0), Fraction(0))))
    return points


def disc_project(pt: Tuple[float, float]) -> DiscPoint:
    """Projeção (x, z) -> (x, z)/sqrt(1 + x^2 + z^2)"""
    x, z = float(pt[0]), float(pt[1])
    scale = math.sqrt(1.0 + x * x + z * z)
    return DiscPoint(x / scale, z / scale)


def disc_direction(theta: float) -> DiscPoint:
    """Direção no infinito de ângulo theta, sobre o círculo unitário"""
    return DiscPoint(math.cos(theta), math.sin(theta))


def disc_from_chart(chart: ChartId, u: float, v: float) -> DiscPoint:
    """
    Coordenadas de carta para o disco

    Em U1/V1 o ponto é s(1, u)/sqrt(1 + u^2 + v^2) e em U2/V2 é s(u, 1)/...,
    com s o sinal de v (ou o hemisfério da carta quando v = 0).
    """
    if chart.base is ChartId.U3:
        return disc_project((u, v))
    if v > 0:
        s = 1.0
    elif v < 0:
        s = -1.0
    else:
        s = -1.0 if chart.is_antipodal else 1.0
    norm = math.sqrt(1.0 + u * u + v * v)
    if chart.base is ChartId.U1:
        return DiscPoint(s / norm, s * u / norm)
    return DiscPoint(s * u / norm, s / norm)


def chart_to_plane(chart: ChartId, u: float, v: float) -> Tuple[float, float]:
    """Inversa das cartas para v != 0"""
    if chart.base is ChartId.U3:
        return u, v
    if v == 0:
        raise ZeroDivisionError("Ponto no equador não tem imagem no plano")
    if chart.base is ChartId.U1:
        return 1.0 / v, u / v
    return u / v, 1.0 / v


def plane_to_chart(chart: ChartId, x: float, z: float) -> Tuple[float, float]:
    """Coordenadas (u, v) de um ponto do plano em U1/U2 (v carrega o sinal do hemisfério)"""
    if chart.base is ChartId.U3:
        return x, z
    if chart.base is ChartId.U1:
        return z / x, 1.0 / x
    return x / z, 1.0 / z
