"""
Índices de pontos singulares: número de voltas, fórmula de setores e Poincaré-Hopf
"""

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger

from compactify import ChartId, to_chart
from exceptions import NonIntegerWinding, OddSectorDifference, SingularOnCircle
from family import KolmogorovParams, build_system
from poly_core import PlanarSystem
from singular import finite_points


@dataclass(frozen=True)
class SectorDecomposition:
    """Quantidade de setores elípticos (e), hiperbólicos (h) e parabólicos (p)"""
    e: int
    h: int
    p: int

    def __post_init__(self):
        if min(self.e, self.h, self.p) < 0:
            raise ValueError("Quantidades de setores não podem ser negativas")

    def to_dict(self) -> Dict[str, int]:
        return {'e': self.e, 'h': self.h, 'p': self.p}


@dataclass
class LedgerEntry:
    name: str
    index: int
    at_infinity: bool = False
    source: str = "winding"

    @property
    def contribution(self) -> int:
        # finitos aparecem nos dois hemisférios; infinitos junto com o antípoda
        return 2 * self.index


@dataclass
class IndexLedger:
    """Balanço de Poincaré-Hopf item a item"""
    entries: List[LedgerEntry] = field(default_factory=list)

    @property
    def total(self) -> int:
        return sum(entry.contribution for entry in self.entries)

    @property
    def balanced(self) -> bool:
        return self.total == 2

    @property
    def finite_sum(self) -> int:
        return sum(e.index for e in self.entries if not e.at_infinity)

    def index_of(self, name: str) -> Optional[int]:
        for entry in self.entries:
            if entry.name == name:
                return entry.index
        return None

    def to_dict(self) -> Dict[str, object]:
        return {
            'entries': [
                {'name': e.name, 'index': e.index, 'at_infinity': e.at_infinity,
                 'source': e.source, 'contribution': e.contribution}
                for e in self.entries
            ],
            'total': self.total,
            'balanced': self.balanced,
        }


def sector_index(s: SectorDecomposition) -> int:
    """i = 1 + (e - h)/2"""
    if (s.e - s.h) % 2 != 0:
        raise OddSectorDifference(f"e - h = {s.e - s.h} é ímpar")
    return 1 + (s.e - s.h) // 2


def sector_decomposition_for_label(label: str, tables) -> SectorDecomposition:
    """
    Decomposição mínima compatível com o índice do rótulo L

    Índice acima de 2 só se fecha com 2i - 2 setores elípticos; os rótulos
    elípticos de índice menor recebem 2 e os demais nenhum.
    """
    i = tables.l_index(label)
    if i > 2:
        e = 2 * i - 2
    elif tables.is_elliptic(label):
        e = 2
    else:
        e = 0
    h = e + 2 - 2 * i
    p = 2 if h == 0 else 0
    return SectorDecomposition(e=e, h=h, p=p)


def _winding_value(sys: PlanarSystem, center: Tuple[float, float], radius: float, samples: int) -> float:
    theta = np.linspace(0.0, 2.0 * math.pi, samples, endpoint=False)
    xs = center[0] + radius * np.cos(theta)
    ys = center[1] + radius * np.sin(theta)
    fx = sys.p.evaluate(xs, ys) + np.zeros_like(xs)
    fy = sys.q.evaluate(xs, ys) + np.zeros_like(xs)
    magnitude = np.hypot(fx, fy)
    scale = float(np.max(magnitude)) if magnitude.size else 0.0
    if scale == 0.0 or float(np.min(magnitude)) <= 1e-14 * max(scale, 1.0):
        raise SingularOnCircle(f"Campo nulo sobre o círculo de raio {radius} em {center}")
    angles = np.arctan2(fy, fx)
    steps = np.diff(np.append(angles, angles[0]))
    # incrementos levados a (-pi, pi]
    steps = (steps + math.pi) % (2.0 * math.pi) - math.pi
    return float(np.sum(steps)) / (2.0 * math.pi)


def winding_index(sys: PlanarSystem, center, radius: float, samples: int = 1024,
                  known_points: Optional[Sequence[Tuple[float, float]]] = None,
                  residue_gate: float = 0.05, max_doublings: int = 6) -> int:
    """
    Índice pelo número de voltas do campo ao longo de um círculo

    Args:
        sys: sistema planar
        center: centro do círculo
        radius: raio (não pode conter outros pontos singulares conhecidos)
        samples: amostras iniciais (dobradas até duas contagens seguidas coincidirem)
        known_points: demais pontos singulares conhecidos
        residue_gate: distância máxima ao inteiro mais próximo

    Returns:
        Índice inteiro
    """
    cx, cy = float(center[0]), float(center[1])
    for point in known_points or []:
        distance = math.hypot(float(point[0]) - cx, float(point[1]) - cy)
        if 0.0 < distance <= radius * (1.0 + 1e-9):
            raise SingularOnCircle(f"Ponto singular {point} dentro do círculo de raio {radius}")

    n = max(int(samples), 8)
    previous = None
    for _ in range(max_doublings + 1):
        value = _winding_value(sys, (cx, cy), radius, n)
        rounded = int(math.floor(0.5 + value))
        if previous is not None and rounded == previous:
            residue = abs(value - rounded)
            if residue >= residue_gate:
                raise NonIntegerWinding(value, residue)
            return rounded
        previous = rounded
        n *= 2
    raise NonIntegerWinding(value, abs(value - round(value)))


def poincare_hopf_check(finite: Sequence[Tuple[str, int]],
                        infinite: Sequence[Tuple[str, int]]) -> IndexLedger:
    """Monta o balanço 2*soma(finitos) + 2*soma(infinitos armazenados) = 2"""
    ledger = IndexLedger()
    for name, index in finite:
        ledger.entries.append(LedgerEntry(name=name, index=int(index)))
    for name, index in infinite:
        ledger.entries.append(LedgerEntry(name=name, index=int(index), at_infinity=True))
    logger.debug(f"Balanço de índices: total {ledger.total}")
    return ledger


def _safe_radius(center: Tuple[float, float], others: Sequence[Tuple[float, float]], cap: float) -> float:
    distances = [math.hypot(o[0] - center[0], o[1] - center[1]) for o in others]
    distances = [d for d in distances if d > 0]
    if not distances:
        return cap
    return min(cap, min(distances) / 3.0)


def numerical_index_ledger(params: KolmogorovParams, samples: int = 1024,
                           residue_gate: float = 0.05) -> IndexLedger:
    """
    Índices numéricos dos pontos finitos, de O1 (carta U1) e de O2 (carta U2)

    Returns:
        IndexLedger com fonte "winding" em todas as entradas
    """
    system = build_system(params)
    points = finite_points(params)
    locations = [p.float_location() for p in points]

    finite: List[Tuple[str, int]] = []
    for point, location in zip(points, locations):
        radius = _safe_radius(location, locations, cap=0.05)
        index = winding_index(system, location, radius, samples, locations, residue_gate)
        finite.append((point.name, index))

    # P4 aparece em U1 como (0, c1*mu/a0); P1, P2, P3 em U2 como (0, 1/z)
    u1 = to_chart(system, ChartId.U1).system
    u1_others = [(0.0, float(params.c1mu / params.a0))] if params.a0 != 0 and params.c1mu != 0 else []
    r1 = _safe_radius((0.0, 0.0), u1_others, cap=0.05)
    o1 = winding_index(u1, (0.0, 0.0), r1, samples, u1_others, residue_gate)

    u2 = to_chart(system, ChartId.U2).system
    u2_others = [(0.0, 1.0 / z) for _, z in locations if z != 0.0]
    r2 = _safe_radius((0.0, 0.0), u2_others, cap=0.05)
    o2 = winding_index(u2, (0.0, 0.0), r2, samples, u2_others, residue_gate)

    return poincare_hopf_check(finite, [("O1", o1), ("O2", o2)])
