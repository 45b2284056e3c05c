"""
Pontos singulares finitos: localização em forma fechada e classificação local
"""

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from loguru import logger

from compactify import ChartId
from exceptions import HypothesisViolation, NotHyperbolic, OrderInsufficient
from family import KolmogorovParams, build_system, check_hypotheses
from poly_core import (
    FIRST, SECOND, PlanarSystem, Poly2, Surd, is_exact, poly_compose_substitute, sign,
)
from tables import load_tables


class LocalType(Enum):
    """Tipo topológico local de um ponto singular"""
    SADDLE = "Saddle"
    STABLE_NODE = "StableNode"
    UNSTABLE_NODE = "UnstableNode"
    SADDLE_NODE = "SaddleNode"
    TOPOLOGICAL_SADDLE = "TopologicalSaddle"
    TOPOLOGICAL_UNSTABLE_NODE = "TopologicalUnstableNode"
    TOPOLOGICAL_STABLE_NODE = "TopologicalStableNode"
    STABLE_FOCUS = "StableFocus"
    UNSTABLE_FOCUS = "UnstableFocus"
    CENTER_OR_FOCUS = "CenterOrFocus"
    DEGENERATE = "Degenerate"

    @property
    def index(self) -> Optional[int]:
        """Índice de Poincaré do tipo; None para degenerado"""
        if self in (LocalType.SADDLE, LocalType.TOPOLOGICAL_SADDLE):
            return -1
        if self is LocalType.SADDLE_NODE:
            return 0
        if self is LocalType.DEGENERATE:
            return None
        return 1

    @property
    def is_saddle_like(self) -> bool:
        return self in (LocalType.SADDLE, LocalType.TOPOLOGICAL_SADDLE)

    @property
    def is_node_like(self) -> bool:
        return self in (
            LocalType.STABLE_NODE, LocalType.UNSTABLE_NODE,
            LocalType.TOPOLOGICAL_STABLE_NODE, LocalType.TOPOLOGICAL_UNSTABLE_NODE,
        )

    @property
    def abbreviation(self) -> str:
        return TYPE_ABBREVIATIONS_INVERSE[self]

    @classmethod
    def from_abbreviation(cls, text: str) -> 'LocalType':
        try:
            return TYPE_ABBREVIATIONS[text]
        except KeyError:
            raise ValueError(f"Abreviação de tipo desconhecida: {text}")


# abreviações usadas nas tabelas de classificação
TYPE_ABBREVIATIONS: Dict[str, LocalType] = {
    "S": LocalType.SADDLE,
    "StN": LocalType.STABLE_NODE,
    "UN": LocalType.UNSTABLE_NODE,
    "SN": LocalType.SADDLE_NODE,
    "TopSaddle": LocalType.TOPOLOGICAL_SADDLE,
    "TopUN": LocalType.TOPOLOGICAL_UNSTABLE_NODE,
    "TopStN": LocalType.TOPOLOGICAL_STABLE_NODE,
    "StF": LocalType.STABLE_FOCUS,
    "UF": LocalType.UNSTABLE_FOCUS,
    "CF": LocalType.CENTER_OR_FOCUS,
    "Deg": LocalType.DEGENERATE,
}
TYPE_ABBREVIATIONS_INVERSE: Dict[LocalType, str] = {v: k for k, v in TYPE_ABBREVIATIONS.items()}


@dataclass
class SingularPoint:
    """Ponto singular com rótulos, carta, tipo local e linearização"""
    labels: Tuple[str, ...]
    location: Tuple[object, object]
    chart: ChartId = ChartId.U3
    local_type: Optional[LocalType] = None
    eigenvalues: Optional[Tuple[float, float]] = None
    multiplicity_note: Optional[str] = None
    hyperbolic_direction: Optional[Tuple[float, float]] = None

    @property
    def name(self) -> str:
        return "≡".join(self.labels)

    @property
    def key(self) -> str:
        """Chave usada nas tabelas, ex.: "P0=P1" """
        return "=".join(self.labels)

    def float_location(self) -> Tuple[float, float]:
        return float(self.location[0]), float(self.location[1])

    def to_dict(self) -> Dict[str, object]:
        return {
            'labels': list(self.labels),
            'chart': self.chart.value,
            'location': [str(self.location[0]), str(self.location[1])],
            'location_float': list(self.float_location()),
            'type': self.local_type.value if self.local_type else None,
            'eigenvalues': list(self.eigenvalues) if self.eigenvalues else None,
            'multiplicity_note': self.multiplicity_note,
        }


@dataclass
class CenterManifoldReduction:
    """Resultado da redução à variedade central num ponto semi-hiperbólico"""
    order: int
    coefficient: Fraction
    eigenvalue: Fraction
    local_type: LocalType
    center_direction: Tuple[Fraction, Fraction]
    transverse_direction: Tuple[Fraction, Fraction]
    hyperbolic_direction: Optional[Tuple[Fraction, Fraction]] = None


@dataclass
class FiniteClassification:
    """Caso, subcaso e pontos classificados"""
    case: int
    subcase: str
    points: List[SingularPoint] = field(default_factory=list)

    def types_by_key(self) -> Dict[str, LocalType]:
        return {point.key: point.local_type for point in self.points}


def rc_value(params: KolmogorovParams) -> Surd:
    """R_c exato"""
    return params.rc


def finite_points(params: KolmogorovParams) -> List[SingularPoint]:
    """
    Pontos singulares finitos P0..P4 em forma fechada, com colisões fundidas

    Args:
        params: parâmetros satisfazendo H1

    Returns:
        Lista de SingularPoint (apenas localização), P0 primeiro
    """
    report = check_hypotheses(params)
    if not report.satisfies_H1:
        raise HypothesisViolation(report, required="H1")

    zero = Fraction(0)
    c2, c3 = params.c2, params.c3
    candidates: List[Tuple[str, Tuple[object, object]]] = [("P0", (zero, zero))]
    if params.D > 0:
        d = params.D
        candidates.append(("P1", (zero, Surd(-c3 / (2 * c2), Fraction(1) / (2 * c2), d))))
        candidates.append(("P2", (zero, Surd(-c3 / (2 * c2), Fraction(-1) / (2 * c2), d))))
    elif params.D == 0:
        candidates.append(("P3", (zero, -c3 / (2 * c2))))
    if params.c1mu != 0:
        candidates.append(("P4", (params.a0 / params.c1mu, zero)))

    merged: List[SingularPoint] = []
    for label, location in candidates:
        for point in merged:
            if point.location[0] == location[0] and point.location[1] == location[1]:
                point.labels = point.labels + (label,)
                point.multiplicity_note = f"{label} colide com {point.labels[0]}"
                break
        else:
            merged.append(SingularPoint(labels=(label,), location=location))
    return merged


def _det_trace(J) -> Tuple[object, object]:
    return J[0][0] * J[1][1] - J[0][1] * J[1][0], J[0][0] + J[1][1]


def classify_hyperbolic(J) -> LocalType:
    """
    Classificação pela jacobiana (entradas exatas ou float)

    Raises:
        NotHyperbolic: det = 0 ou autovalores imaginários puros
    """
    det, tr = _det_trace(J)
    det_sign, tr_sign = sign(det), sign(tr)
    if det_sign == 0:
        raise NotHyperbolic("Determinante nulo")
    if det_sign < 0:
        return LocalType.SADDLE
    if tr_sign == 0:
        raise NotHyperbolic("Traço nulo com determinante positivo")
    discriminant = tr * tr - 4 * det
    if sign(discriminant) < 0:
        return LocalType.STABLE_FOCUS if tr_sign < 0 else LocalType.UNSTABLE_FOCUS
    return LocalType.STABLE_NODE if tr_sign < 0 else LocalType.UNSTABLE_NODE


def real_eigenvalues(J) -> Optional[Tuple[float, float]]:
    """Autovalores reais em float (None se complexos)"""
    det, tr = _det_trace(J)
    disc = float(tr) ** 2 - 4 * float(det)
    if disc < -1e-14:
        return None
    root = max(disc, 0.0) ** 0.5
    return ((float(tr) - root) / 2, (float(tr) + root) / 2)


def _kernel_vector(a, b, c, d) -> Tuple[Fraction, Fraction]:
    # vetor não nulo no núcleo de [[a, b], [c, d]] (matriz singular)
    if a != 0 or b != 0:
        vec = (b, -a)
    else:
        vec = (d, -c)
    if vec[0] < 0 or (vec[0] == 0 and vec[1] < 0):
        vec = (-vec[0], -vec[1])
    return vec


def _truncate(f: Poly2, order: int) -> Poly2:
    return Poly2({key: c for key, c in f.items() if key[0] + key[1] <= order})


def semi_hyperbolic_reduction(sys: PlanarSystem, pt: Tuple[Fraction, Fraction],
                              order: int = 4) -> CenterManifoldReduction:
    """
    Reduz à variedade central e classifica pelo termo dominante da deriva

    Args:
        sys: sistema polinomial
        pt: ponto singular racional com exatamente um autovalor nulo
        order: ordem máxima do desenvolvimento

    Returns:
        CenterManifoldReduction com tipo, ordem e direções
    """
    x0, y0 = Fraction(pt[0]), Fraction(pt[1])
    x = Poly2.variable(FIRST)
    y = Poly2.variable(SECOND)
    moved = sys.substitute(x + x0, y + y0)

    J = moved.jacobian((Fraction(0), Fraction(0)))
    det, lam = _det_trace(J)
    if det != 0 or lam == 0:
        raise NotHyperbolic(f"Ponto {pt} não é semi-hiperbólico (det={det}, tr={lam})")
    a, b = J[0]
    c, d = J[1]
    e0 = _kernel_vector(a, b, c, d)
    el = _kernel_vector(a - lam, b, c, d - lam)

    # (x, y) = T (s, t) com T = [e0 | el]
    s = Poly2.variable(FIRST)
    t = Poly2.variable(SECOND)
    in_new = moved.substitute(s * e0[0] + t * el[0], s * e0[1] + t * el[1])
    det_t = e0[0] * el[1] - el[0] * e0[1]
    inv = [[el[1] / det_t, -el[0] / det_t], [-e0[1] / det_t, e0[0] / det_t]]
    f = in_new.p * inv[0][0] + in_new.q * inv[0][1]
    g = in_new.q * inv[1][1] + in_new.p * inv[1][0]
    # parte não linear de t' (a linear é lam*t)
    g_rest = g - t * lam

    # t = phi(s) = sum h_k s^k
    phi = Poly2()
    for k in range(2, order + 1):
        f_on = _truncate(poly_compose_substitute(f, s, phi), k)
        g_on = _truncate(poly_compose_substitute(g_rest, s, phi), k)
        dphi = Poly2({(i - 1, 0): coef * i for (i, _), coef in phi.items()})
        lhs = _truncate(dphi * f_on, k)
        h_k = (lhs.coeff(k, 0) - g_on.coeff(k, 0)) / lam
        if h_k != 0:
            phi = phi + Poly2.monomial(h_k, k, 0)

    drift = _truncate(poly_compose_substitute(f, s, phi), order)
    lowest = None
    for k in range(1, order + 1):
        coef = drift.coeff(k, 0)
        if coef != 0:
            lowest = (k, coef)
            break
    if lowest is None:
        raise OrderInsufficient(order)

    m, a_m = lowest
    hyperbolic = None
    if m % 2 == 0:
        local_type = LocalType.SADDLE_NODE
        side = -sign(a_m) * sign(lam)
        hyperbolic = (e0[0] * side, e0[1] * side)
    elif a_m > 0 and lam > 0:
        local_type = LocalType.TOPOLOGICAL_UNSTABLE_NODE
    elif a_m < 0 and lam < 0:
        local_type = LocalType.TOPOLOGICAL_STABLE_NODE
    else:
        local_type = LocalType.TOPOLOGICAL_SADDLE

    logger.debug(f"Variedade central em {pt}: deriva {a_m}*s^{m}, lambda={lam} -> {local_type.value}")
    return CenterManifoldReduction(
        order=m, coefficient=a_m, eigenvalue=lam, local_type=local_type,
        center_direction=e0, transverse_direction=el, hyperbolic_direction=hyperbolic,
    )


def classify_semi_hyperbolic(sys: PlanarSystem, pt: Tuple[Fraction, Fraction], order: int = 4) -> LocalType:
    """Tipo do ponto semi-hiperbólico pela deriva na variedade central"""
    return semi_hyperbolic_reduction(sys, pt, order).local_type


def classify_point(sys: PlanarSystem, pt, max_order: int = 8,
                   start_order: int = 4) -> Tuple[LocalType, Optional[Tuple[float, float]], Optional[CenterManifoldReduction]]:
    """
    Pipeline genérico: hiperbólico pelos autovalores, semi-hiperbólico pela variedade central

    Returns:
        (tipo, autovalores reais ou None, redução quando semi-hiperbólico)
    """
    J = sys.jacobian(pt)
    eigen = real_eigenvalues(J)
    det, tr = _det_trace(J)
    if sign(det) != 0:
        try:
            return classify_hyperbolic(J), eigen, None
        except NotHyperbolic:
            # parte linear de centro: só a forma normal decidiria
            return LocalType.CENTER_OR_FOCUS, eigen, None
    if sign(tr) == 0:
        return LocalType.DEGENERATE, eigen, None
    pt = tuple(v.rational() if isinstance(v, Surd) and v.is_rational else v for v in pt)
    if not all(is_exact(v) and not isinstance(v, Surd) for v in pt):
        logger.warning(f"Ponto semi-hiperbólico irracional {pt}: marcado como degenerado")
        return LocalType.DEGENERATE, eigen, None

    order = start_order
    while order <= max_order:
        try:
            reduction = semi_hyperbolic_reduction(sys, pt, order)
            return reduction.local_type, eigen, reduction
        except OrderInsufficient:
            logger.debug(f"Ordem {order} insuficiente em {pt}, elevando")
            order += 2
    return LocalType.DEGENERATE, eigen, None


def classify_finite_generic(params: KolmogorovParams, max_order: int = 8) -> List[SingularPoint]:
    """Classifica cada ponto finito pelo pipeline genérico"""
    system = build_system(params)
    points = finite_points(params)
    for point in points:
        local_type, eigen, reduction = classify_point(system, point.location, max_order=max_order)
        point.local_type = local_type
        point.eigenvalues = eigen
        if reduction is not None and reduction.hyperbolic_direction is not None:
            point.hyperbolic_direction = (
                float(reduction.hyperbolic_direction[0]), float(reduction.hyperbolic_direction[1])
            )
    return points


def classify_finite_closed_form(params: KolmogorovParams, tables=None) -> FiniteClassification:
    """
    Caso e subcaso por avaliação exata das condições

    Args:
        params: parâmetros satisfazendo H1 (e mu != -1)
        tables: ClassificationTables já carregadas (opcional)

    Returns:
        FiniteClassification com os tipos impressos na linha correspondente
    """
    tables = tables or load_tables()
    report = check_hypotheses(params)
    if not report.satisfies_H1:
        raise HypothesisViolation(report, required="H1")

    case = tables.finite_case(params)
    row = tables.finite_row(params, case)
    points = finite_points(params)
    system = build_system(params)
    by_key = {point.key: point for point in points}
    for key, abbreviation in row.types.items():
        if key not in by_key:
            raise ValueError(f"Linha {row.row_id} cita {key}, ausente em {list(by_key)}")
        point = by_key[key]
        point.local_type = LocalType.from_abbreviation(abbreviation)
        point.eigenvalues = real_eigenvalues(system.jacobian(point.location))
    return FiniteClassification(case=case, subcase=row.row_id, points=points)
