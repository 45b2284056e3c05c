"""
Explosões direcionais e as cadeias de dessingularização do ponto infinito O1
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from loguru import logger

from compactify import ChartId, to_chart
from exceptions import (
    DepthExceeded, HypothesisViolation, NotSingularAtOrigin, UnresolvedDegenerate, ZeroPolynomial,
)
from family import KolmogorovParams, build_system, check_hypotheses
from poly_core import (
    FIRST, SECOND, PlanarSystem, Poly2, Surd, axis_restriction, exact_div_by_power,
    leading_homogeneous_part, sign, univariate_real_roots,
)
from singular import LocalType, SingularPoint, classify_hyperbolic, classify_point
from tables import load_tables


@dataclass
class BlowupNode:
    """Nó da árvore de explosões"""
    system: PlanarSystem
    transform: str
    cancelled_power: int = 0
    dicritical: bool = False
    swaps_quadrants: bool = False
    vertical_direction_characteristic: bool = False
    divisor_singularities: List[SingularPoint] = field(default_factory=list)
    children: List['BlowupNode'] = field(default_factory=list)
    depth: int = 0

    def total_cancelled(self) -> int:
        """Potência total cancelada até as folhas (primeiro filho em cada nível)"""
        power = self.cancelled_power
        if self.children:
            power += self.children[0].total_cancelled()
        return power

    def leaves(self) -> List['BlowupNode']:
        if not self.children:
            return [self]
        result = []
        for child in self.children:
            result.extend(child.leaves())
        return result

    def to_dict(self) -> Dict[str, object]:
        return {
            'transform': self.transform,
            'system': self.system.format(),
            'cancelled_power': self.cancelled_power,
            'dicritical': self.dicritical,
            'swaps_quadrants': self.swaps_quadrants,
            'vertical_direction_characteristic': self.vertical_direction_characteristic,
            'divisor_singularities': [p.to_dict() for p in self.divisor_singularities],
            'children': [child.to_dict() for child in self.children],
        }


def _check_singular_origin(sys: PlanarSystem) -> None:
    if sys.p.coeff(0, 0) != 0 or sys.q.coeff(0, 0) != 0:
        raise NotSingularAtOrigin(f"Origem não é singular: {sys.format()}")


def _lowest_degree(sys: PlanarSystem) -> int:
    degrees = [f.lowest_degree for f in (sys.p, sys.q) if not f.is_zero()]
    return min(degrees)


def characteristic_poly(sys: PlanarSystem) -> Poly2:
    """
    F = x Q_m - y P_m com as partes homogêneas de menor grau m

    Returns:
        Polinômio característico; dicrítico quando identicamente nulo
    """
    _check_singular_origin(sys)
    m = _lowest_degree(sys)
    p_m = sys.p.homogeneous_part(m)
    q_m = sys.q.homogeneous_part(m)
    x = Poly2.variable(FIRST)
    y = Poly2.variable(SECOND)
    return x * q_m - y * p_m


def blowup_substitution(sys: PlanarSystem) -> PlanarSystem:
    """x' = P(x, xz), z' = (Q(x, xz) - z P(x, xz)) / x, antes de cancelar fatores comuns"""
    _check_singular_origin(sys)
    x = Poly2.variable(FIRST)
    z = Poly2.variable(SECOND)
    moved = sys.substitute(x, x * z)
    numerator = moved.q - z * moved.p
    return PlanarSystem(moved.p, exact_div_by_power(numerator, FIRST, 1), sys.var_names)


def vertical_blowup(sys: PlanarSystem) -> Tuple[PlanarSystem, int]:
    """
    Explosão vertical com cancelamento de x^(m-1), ou x^m no caso dicrítico

    Returns:
        (sistema explodido, potência cancelada)
    """
    m = _lowest_degree(sys)
    dicritical = characteristic_poly(sys).is_zero()
    substituted = blowup_substitution(sys)
    power = m if dicritical else m - 1
    blown = PlanarSystem(
        exact_div_by_power(substituted.p, FIRST, power),
        exact_div_by_power(substituted.q, FIRST, power),
        sys.var_names,
    )
    logger.debug(f"Explosão vertical: m={m}, dicrítico={dicritical}, cancelado x^{power}")
    return blown, power


def _is_linearly_zero(sys: PlanarSystem) -> bool:
    return _lowest_degree(sys) >= 2


def _divisor_roots(sys: PlanarSystem) -> List[object]:
    # pontos singulares sobre o divisor x = 0
    p_line = axis_restriction(sys.p, FIRST)
    q_line = axis_restriction(sys.q, FIRST)
    p_zero = not any(c != 0 for c in p_line)
    q_zero = not any(c != 0 for c in q_line)
    if p_zero and q_zero:
        raise ZeroPolynomial("Divisor formado só por pontos singulares")
    if p_zero:
        return [root for root, _ in univariate_real_roots(q_line)]
    candidates = [root for root, _ in univariate_real_roots(p_line)]
    if q_zero:
        return candidates
    roots = []
    for root in candidates:
        if isinstance(root, float):
            if abs(sys.q.evaluate(0.0, root)) < 1e-9:
                roots.append(root)
        elif sys.q.evaluate_exact(Fraction(0), root) == 0:
            roots.append(root)
    return roots


def _translate(sys: PlanarSystem, shift: Fraction) -> PlanarSystem:
    x = Poly2.variable(FIRST)
    z = Poly2.variable(SECOND)
    return sys.substitute(x, z + shift)


def desingularize(sys: PlanarSystem, max_depth: int = 4, _depth: int = 0,
                  _transform: str = "origem") -> BlowupNode:
    """
    Árvore de explosões verticais até todos os pontos do divisor serem elementares

    Args:
        sys: sistema com singularidade isolada e parte linear nula na origem
        max_depth: número máximo de explosões encadeadas

    Returns:
        BlowupNode raiz (o próprio sistema); cada filho é uma explosão
    """
    _check_singular_origin(sys)
    root = BlowupNode(system=sys, transform=_transform, depth=_depth)
    if not _is_linearly_zero(sys):
        return root
    if _depth >= max_depth:
        raise DepthExceeded(f"Profundidade {max_depth} atingida sem resolver a singularidade")

    F = characteristic_poly(sys)
    blown, power = vertical_blowup(sys)
    a, b = sys.var_names
    child = BlowupNode(
        system=PlanarSystem(blown.p, blown.q, (a, f"w{_depth + 1}")),
        transform=f"{b} = {a}*w{_depth + 1}",
        cancelled_power=power,
        dicritical=F.is_zero(),
        swaps_quadrants=True,
        vertical_direction_characteristic=(not F.is_zero()) and F.coeff(0, F.degree) == 0,
        depth=_depth + 1,
    )
    root.children.append(child)

    for k, w_star in enumerate(_divisor_roots(blown)):
        location = (Fraction(0), w_star)
        point = SingularPoint(labels=(f"E{_depth + 1}.{k}",), location=location, chart=ChartId.U1)
        rational = not isinstance(w_star, (Surd, float)) or (isinstance(w_star, Surd) and w_star.is_rational)
        if rational:
            w_value = w_star.rational() if isinstance(w_star, Surd) else Fraction(w_star)
            shifted = _translate(blown, w_value)
            if _is_linearly_zero(shifted):
                point.local_type = LocalType.DEGENERATE
                grandchild = desingularize(shifted, max_depth, _depth + 1,
                                           _transform=f"w{_depth + 1} -> w{_depth + 1} + {w_value}")
                child.children.extend(grandchild.children)
                child.divisor_singularities.append(point)
                continue
        if isinstance(w_star, float):
            local_type, eigen, _ = classify_point(blown, (0.0, w_star))
        else:
            local_type, eigen, _ = classify_point(blown, location)
        point.local_type = local_type
        point.eigenvalues = eigen
        child.divisor_singularities.append(point)
    return root


def family_u1_system(params: KolmogorovParams) -> PlanarSystem:
    """Sistema da carta U1 da família"""
    return to_chart(build_system(params), ChartId.U1).system


def family_chain(params: KolmogorovParams) -> Dict[str, PlanarSystem]:
    """
    Sistemas intermediários da dessingularização de O1

    Returns:
        Mapa ordenado: "U1", "substituted_1", "blown_1" e, quando c1 != 0,
        "substituted_2", "blown_2"
    """
    chain: Dict[str, PlanarSystem] = {}
    system = family_u1_system(params)
    chain["U1"] = system
    chain["substituted_1"] = blowup_substitution(system)
    blown, _ = vertical_blowup(system)
    chain["blown_1"] = blown
    if params.c1 != 0:
        chain["substituted_2"] = blowup_substitution(blown)
        chain["blown_2"], _ = vertical_blowup(blown)
    return chain


def _require_h2(params: KolmogorovParams) -> None:
    report = check_hypotheses(params)
    if not report.satisfies_H2:
        raise HypothesisViolation(report, required="H2")


def o1_label(params: KolmogorovParams, tables=None) -> str:
    """Rótulo L do retrato local de O1 pelas regras de O1 do YAML"""
    _require_h2(params)
    tables = tables or load_tables()
    label = tables.o1_label(params)
    logger.debug(f"O1 de {params.label()}: {label}")
    return label


def o2_classify(params: KolmogorovParams) -> LocalType:
    """Tipo da origem de U2 pelos autovalores de diag(-c2(mu+1), -c2)"""
    _require_h2(params)
    u2 = to_chart(build_system(params), ChartId.U2).system
    return classify_hyperbolic(u2.jacobian((Fraction(0), Fraction(0))))


def o2_closed_form_type(params: KolmogorovParams) -> LocalType:
    """Forma condicional do tipo de O2"""
    if params.mu < -1:
        return LocalType.SADDLE
    return LocalType.STABLE_NODE if params.c2 > 0 else LocalType.UNSTABLE_NODE


def _node_by_sign(value) -> LocalType:
    return LocalType.UNSTABLE_NODE if value > 0 else LocalType.STABLE_NODE


def divisor_point_types(params: KolmogorovParams) -> Dict[str, Tuple[Tuple[object, object], LocalType]]:
    """
    Pontos do divisor final e seus tipos em forma fechada

    Returns:
        Mapa rótulo -> (localização nas coordenadas da última explosão, tipo)
    """
    c0, c1, c2, c3, mu, A = params.c0, params.c1, params.c2, params.c3, params.mu, params.A
    zero = Fraction(0)
    points: Dict[str, Tuple[Tuple[object, object], LocalType]] = {}

    if c1 != 0 and mu != -2:
        if (mu + 1) * (mu + 2) > 0:
            q0 = LocalType.SADDLE
        else:
            q0 = _node_by_sign(-c2)
        points["Q0"] = ((zero, zero), q0)
        if c2 * A > 0:
            q1 = LocalType.TOPOLOGICAL_SADDLE
        elif c2 * (mu + 2) > 0:
            q1 = LocalType.TOPOLOGICAL_UNSTABLE_NODE
        else:
            q1 = LocalType.TOPOLOGICAL_STABLE_NODE
        points["Q1"] = ((zero, -c2 / c1), q1)
        return points

    if c1 != 0:
        w_star = -c2 / c1
        det = c1 * (params.a0 - 2 * c0) * w_star ** 3
        trace = -c3 * w_star
        if det < 0:
            r_type = LocalType.SADDLE
        elif trace == 0:
            r_type = LocalType.CENTER_OR_FOCUS
        elif params.beta_squared < 0:
            r_type = LocalType.UNSTABLE_FOCUS if trace > 0 else LocalType.STABLE_FOCUS
        else:
            r_type = _node_by_sign(trace)
        points["R"] = ((zero, w_star), r_type)
        return points

    # cadeia c1 = 0: S0 na origem e S_i em w = 1/z_i
    if mu + 1 > 0:
        s0 = LocalType.SADDLE
    else:
        s0 = _node_by_sign(-c2)
    points["S0"] = ((zero, zero), s0)
    if c0 == 0:
        if c3 != 0:
            s4 = LocalType.SADDLE if c2 > 0 else LocalType.STABLE_NODE
            points["S4"] = ((zero, -c2 / c3), s4)
        return points
    if params.D == 0:
        points["S3"] = ((zero, -2 * c2 / c3), LocalType.SADDLE_NODE)
    elif params.D > 0:
        rc = params.rc
        z1 = (rc - c3) / (2 * c2)
        z2 = -(rc + c3) / (2 * c2)
        if c0 * A < 0:
            s1 = LocalType.SADDLE
        else:
            s1 = LocalType.STABLE_NODE if A > 0 else LocalType.UNSTABLE_NODE
        if c2 * A > 0:
            s2 = LocalType.SADDLE
        else:
            s2 = LocalType.STABLE_NODE if A > 0 else LocalType.UNSTABLE_NODE
        points["S1"] = ((zero, 1 / z1), s1)
        points["S2"] = ((zero, 1 / z2), s2)
    return points


def family_divisor_points(params: KolmogorovParams, max_depth: int = 4) -> Dict[str, SingularPoint]:
    """
    Pipeline genérico: dessingulariza O1 e rotula os pontos do divisor final
    comparando a localização com a forma fechada
    """
    tree = desingularize(family_u1_system(params), max_depth)
    expected = divisor_point_types(params)
    found: Dict[str, SingularPoint] = {}
    for leaf in tree.leaves():
        for point in leaf.divisor_singularities:
            if point.local_type is LocalType.DEGENERATE:
                continue
            w_value = float(point.location[1])
            for label, (location, _) in expected.items():
                if abs(float(location[1]) - w_value) < 1e-12:
                    point.labels = (label,)
                    found[label] = point
                    break
            else:
                logger.warning(f"Ponto do divisor sem rótulo em w={w_value}")
    return found


def _valuation(f: Poly2, var: int) -> int:
    # maior potência de var que divide todos os termos
    if f.is_zero():
        return 0
    return min(i if var == FIRST else j for (i, j), _ in f.items())


def horizontal_blowup(sys: PlanarSystem) -> Tuple[PlanarSystem, int]:
    """
    Explosão horizontal x = t*y: t' = (P - t Q)/y, y' = Q, com cancelamento
    da maior potência comum de y

    Returns:
        (sistema explodido nas variáveis (t, y), potência de y cancelada)
    """
    _check_singular_origin(sys)
    t = Poly2.variable(FIRST)
    y = Poly2.variable(SECOND)
    moved = sys.substitute(t * y, y)
    numerator = exact_div_by_power(moved.p - t * moved.q, SECOND, 1)
    power = min(_valuation(numerator, SECOND), _valuation(moved.q, SECOND))
    blown = PlanarSystem(
        exact_div_by_power(numerator, SECOND, power),
        exact_div_by_power(moved.q, SECOND, power),
        ("t", sys.var_names[1]),
    )
    logger.debug(f"Explosão horizontal: cancelado {sys.var_names[1]}^{power}")
    return blown, power


def o1_axis_point(params: KolmogorovParams):
    """
    Direção do eixo invariante z = 0 em O1: ponto (0, 0) da explosão
    horizontal da carta U1

    Returns:
        (tipo, autovalores, redução) como em classify_point
    """
    blown, _ = horizontal_blowup(family_u1_system(params))
    return classify_point(blown, (Fraction(0), Fraction(0)))


def o1_axis_separatrix(params: KolmogorovParams, side: int) -> bool:
    """
    O semieixo z = 0 que chega a O1 (side > 0) ou a V1 (side < 0) é separatriz?

    Sela e sela topológica: sim dos dois lados. Nós: não. Sela-nó com a
    variedade central sobre o divisor: sim; com a variedade central sobre o
    eixo, só do lado hiperbólico.
    """
    local_type, _, reduction = o1_axis_point(params)
    if local_type is LocalType.DEGENERATE:
        raise UnresolvedDegenerate(f"Direção do eixo em O1 degenerada para {params.label()}")
    if local_type.is_saddle_like:
        return True
    if local_type is not LocalType.SADDLE_NODE:
        return False
    if reduction.center_direction[1] == 0:
        return True
    return sign(reduction.hyperbolic_direction[1]) == (1 if side > 0 else -1)


def topological_class(local_type: LocalType, eigenvalues=None) -> str:
    """
    Classe topológica usada na assinatura de O1: S, StN, UN, SNs/SNu (sela-nó
    com setor parabólico atrator/repulsor), CF ou Deg
    """
    if local_type.is_saddle_like:
        return "S"
    if local_type in (LocalType.STABLE_NODE, LocalType.TOPOLOGICAL_STABLE_NODE, LocalType.STABLE_FOCUS):
        return "StN"
    if local_type in (LocalType.UNSTABLE_NODE, LocalType.TOPOLOGICAL_UNSTABLE_NODE, LocalType.UNSTABLE_FOCUS):
        return "UN"
    if local_type is LocalType.SADDLE_NODE:
        lam = max(eigenvalues, key=abs)
        return "SNu" if lam > 0 else "SNs"
    return local_type.abbreviation


def _sign_text(value) -> str:
    return {1: "+", -1: "-", 0: "0"}[sign(value)]


def o1_signature(params: KolmogorovParams, max_depth: int = 4) -> Dict[str, str]:
    """
    Assinatura de O1 montada só com a dessingularização genérica

    Returns:
        Classe de cada ponto do divisor final, do ponto do eixo na explosão
        horizontal, sentido do equador ("equator", sinal de u' com u > 0 em v = 0)
        e, nas cadeias c1 != 0, lado do divisor de Q1/R ("side")
    """
    _require_h2(params)
    u1 = family_u1_system(params)
    signature: Dict[str, str] = {}
    for label, point in family_divisor_points(params, max_depth).items():
        signature[label] = topological_class(point.local_type, point.eigenvalues)
        if label in ("Q1", "R"):
            signature["side"] = _sign_text(point.location[1])
    axis_type, axis_eigen, _ = o1_axis_point(params)
    signature["axis"] = topological_class(axis_type, axis_eigen)
    equator = [c for c in axis_restriction(u1.p, SECOND) if c != 0]
    signature["equator"] = _sign_text(equator[0]) if equator else "0"
    return signature


def o1_label_from_blowup(params: KolmogorovParams, tables=None, max_depth: int = 4) -> Optional[str]:
    """Rótulo L cuja assinatura coincide com a da dessingularização (None se nenhum)"""
    tables = tables or load_tables()
    signature = o1_signature(params, max_depth)
    label = tables.o1_label_for_signature(signature)
    logger.debug(f"Assinatura de O1 de {params.label()}: {signature} -> {label}")
    return label
