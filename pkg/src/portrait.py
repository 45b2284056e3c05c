"""
Retrato de fase global no disco de Poincaré

Integração de órbitas com troca de cartas, traçado das separatrizes,
contagem S/R (fórmula de Euler e flood fill) e desenho em SVG.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger
from scipy import ndimage
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import cKDTree

from blowup import divisor_point_types, family_chain, o1_axis_separatrix, o2_classify
from compactify import ChartId, DiscPoint, chart_to_plane, disc_from_chart, plane_to_chart, to_chart
from config import AnalysisConfig
from exceptions import (
    HypothesisViolation, ResolutionInsufficient, SeparatrixNotTerminated, UnresolvedDegenerate,
)
from family import KolmogorovParams, build_system, invariant_lines
from integrator import RKF45, IntegrationResult, radau_integrate
from poly_core import PlanarSystem
from singular import LocalType, SingularPoint, classify_finite_generic, finite_points
from svg_builder import SVG

# posições dos pontos infinitos armazenados e de seus antípodas no disco
INFINITE_POINTS: Dict[str, Tuple[float, float]] = {
    "O1": (1.0, 0.0),
    "O2": (0.0, 1.0),
    "V1": (-1.0, 0.0),
    "V2": (0.0, -1.0),
}
EQUATOR_ORDER = ("O1", "O2", "V1", "V2")

SADDLE_LIKE = (LocalType.SADDLE, LocalType.TOPOLOGICAL_SADDLE)
WITH_SEPARATRICES = (LocalType.SADDLE, LocalType.TOPOLOGICAL_SADDLE, LocalType.SADDLE_NODE)
SEMI_HYPERBOLIC = (LocalType.SADDLE_NODE, LocalType.TOPOLOGICAL_SADDLE,
                   LocalType.TOPOLOGICAL_STABLE_NODE, LocalType.TOPOLOGICAL_UNSTABLE_NODE)


class Termination(Enum):
    REACHED_SINGULARITY = "ReachedSingularity"
    REACHED_INFINITY = "ReachedInfinity"
    STEP_LIMIT = "StepLimit"


class SeparatrixKind(Enum):
    SINGULAR_POINT = "SingularPointItem"
    INFINITY_ARC = "InfinityArc"
    BOUNDARY_ORBIT = "HyperbolicBoundaryOrbit"


@dataclass
class Orbit:
    """Poligonal no disco; forward indica se a ordem dos pontos segue o tempo"""
    points: np.ndarray
    termination: Termination
    target: Optional[str] = None
    source: Optional[str] = None
    forward: bool = True

    @property
    def disc_points(self) -> List[DiscPoint]:
        return [DiscPoint(float(x), float(y)) for x, y in self.points]

    @property
    def length(self) -> float:
        if len(self.points) < 2:
            return 0.0
        steps = np.diff(self.points, axis=0)
        return float(np.sum(np.hypot(steps[:, 0], steps[:, 1])))

    @property
    def endpoint_key(self) -> Tuple[str, str]:
        return tuple(sorted((self.source or "?", self.target or "?")))

    def to_dict(self) -> Dict[str, object]:
        return {
            'source': self.source,
            'target': self.target,
            'termination': self.termination.value,
            'forward': self.forward,
            'n_points': int(len(self.points)),
            'length': round(self.length, 9),
        }


@dataclass
class Separatrix:
    kind: SeparatrixKind
    name: str
    endpoints: Tuple[Optional[str], Optional[str]] = (None, None)
    orbit: Optional[Orbit] = None
    position: Optional[Tuple[float, float]] = None

    def to_dict(self) -> Dict[str, object]:
        data = {'kind': self.kind.value, 'name': self.name, 'endpoints': list(self.endpoints)}
        if self.orbit is not None:
            data['orbit'] = self.orbit.to_dict()
        if self.position is not None:
            data['position'] = list(self.position)
        return data


@dataclass
class SeparatrixConfiguration:
    """Configuração de separatrizes com as contagens S e R"""
    separatrices: List[Separatrix] = field(default_factory=list)
    regions: List[Tuple[float, float]] = field(default_factory=list)
    r_count: int = 0
    r_count_raster: Optional[int] = None
    discarded_duplicates: int = 0

    @property
    def s_count(self) -> int:
        return len(self.separatrices)

    def of_kind(self, kind: SeparatrixKind) -> List[Separatrix]:
        return [s for s in self.separatrices if s.kind is kind]

    def orbits(self) -> List[Orbit]:
        return [s.orbit for s in self.separatrices if s.orbit is not None and s.kind is SeparatrixKind.BOUNDARY_ORBIT]

    def polylines(self) -> List[np.ndarray]:
        """Poligonais de arcos e órbitas (os pontos não dividem regiões)"""
        return [s.orbit.points for s in self.separatrices if s.orbit is not None]

    def euler_region_count(self) -> int:
        """R = E - V + C sobre o grafo de separatrizes desenhado no disco fechado"""
        names = [s.name for s in self.of_kind(SeparatrixKind.SINGULAR_POINT)]
        index = {name: k for k, name in enumerate(names)}
        rows: List[int] = []
        cols: List[int] = []
        edges = 0
        for item in self.separatrices:
            if item.kind is SeparatrixKind.SINGULAR_POINT:
                continue
            ends = []
            for end in item.endpoints:
                if end not in index:
                    # curva pendente: vértice próprio, não separa regiões
                    end = f"?{len(index)}"
                    index[end] = len(index)
                ends.append(index[end])
            rows.append(ends[0])
            cols.append(ends[1])
            edges += 1
        n = len(index)
        graph = coo_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n))
        components, _ = connected_components(graph, directed=False)
        return edges - n + components

    def to_dict(self) -> Dict[str, object]:
        return {
            's_count': self.s_count,
            'r_count': self.r_count,
            'r_count_raster': self.r_count_raster,
            'discarded_duplicates': self.discarded_duplicates,
            'separatrices': [s.to_dict() for s in self.separatrices],
            'regions': [list(r) for r in self.regions],
        }


@dataclass
class RenderOptions:
    size: int = 600
    margin: int = 20
    labels: bool = True
    sample_orbits: bool = True
    sample_steps: int = 1500
    title: Optional[str] = None
    subcase: Optional[str] = None
    g_label: Optional[str] = None


def _side(value: float, default: int = 1) -> int:
    if value > 0:
        return 1
    if value < 0:
        return -1
    return default


def _equator_arc(x_disc: float, y_disc: float) -> str:
    theta = math.atan2(y_disc, x_disc) % (2.0 * math.pi)
    k = int(theta // (math.pi / 2.0)) % 4
    return f"{EQUATOR_ORDER[k]}-{EQUATOR_ORDER[(k + 1) % 4]}"


def _densify(points: np.ndarray, spacing: float) -> np.ndarray:
    """Reamostra a poligonal com espaçamento máximo dado"""
    if len(points) < 2:
        return np.asarray(points, dtype=float)
    steps = np.hypot(*np.diff(points, axis=0).T)
    arc = np.concatenate([[0.0], np.cumsum(steps)])
    if arc[-1] == 0.0:
        return points[:1]
    samples = np.arange(0.0, arc[-1], spacing)
    samples = np.append(samples, arc[-1])
    return np.column_stack([np.interp(samples, arc, points[:, 0]), np.interp(samples, arc, points[:, 1])])


def polyline_hausdorff(a: np.ndarray, b: np.ndarray, spacing: float = 2.5e-5) -> float:
    """Distância de Hausdorff entre duas poligonais (erro de no máximo spacing/2)"""
    dense_a, dense_b = _densify(a, spacing), _densify(b, spacing)
    d_ab = float(np.max(cKDTree(dense_b).query(a)[0]))
    d_ba = float(np.max(cKDTree(dense_a).query(b)[0]))
    return max(d_ab, d_ba)


def normalized_field(system: PlanarSystem, forward: bool = True,
                     flip_below: bool = False) -> Callable[[np.ndarray], np.ndarray]:
    """Campo dividido pela norma; flip_below inverte o sentido em v < 0 (cartas com d - 1 ímpar)"""
    orientation = 1.0 if forward else -1.0

    def f(y: np.ndarray) -> np.ndarray:
        a, b = float(y[0]), float(y[1])
        fa, fb = system.evaluate(a, b)
        if flip_below and b < 0:
            fa, fb = -fa, -fb
        norm = math.hypot(fa, fb)
        if norm == 0.0 or not math.isfinite(norm):
            return np.zeros(2)
        return np.array([fa, fb]) * (orientation / norm)

    return f


class DiscFlow:
    """
    Campo compactificado normalizado por comprimento de arco

    Usa o plano dentro da caixa max(|x|, |z|) <= plane_box e as cartas U1/U2
    fora dela; v < 0 nas cartas representa o hemisfério antípoda. Pontos em
    degenerate (e sempre O1/V1) usam degenerate_capture_radius.
    """

    def __init__(self, params: KolmogorovParams, config: AnalysisConfig,
                 known_points: Dict[str, Tuple[float, float]],
                 degenerate: Sequence[str] = ()):
        system = build_system(params)
        self.config = config
        self.degree = system.degree
        self.systems: Dict[ChartId, PlanarSystem] = {
            ChartId.U3: system,
            ChartId.U1: to_chart(system, ChartId.U1).system,
            ChartId.U2: to_chart(system, ChartId.U2).system,
        }
        self.finite_plane = dict(known_points)
        largest = max([max(abs(x), abs(z)) for x, z in self.finite_plane.values()] + [0.0])
        self.box = max(config.plane_box, 2.0 * largest + 1.0)
        self.degenerate = set(degenerate) | {"O1", "V1"}
        h_max = config.max_step_disc / 2.0
        self.rkf = RKF45(tolerance=config.rtol, h_max=h_max,
                         h_floor=config.stiff_step_ratio * h_max, stiff_window=config.stiff_window)

    def field(self, chart: ChartId, forward: bool = True) -> Callable[[np.ndarray], np.ndarray]:
        flip_below = chart is not ChartId.U3 and (self.degree - 1) % 2 == 1
        return normalized_field(self.systems[chart], forward, flip_below)

    def disc(self, chart: ChartId, y, side: int) -> Tuple[float, float]:
        if chart is not ChartId.U3 and side < 0:
            chart = ChartId.V1 if chart is ChartId.U1 else ChartId.V2
        point = disc_from_chart(chart, float(y[0]), float(y[1]))
        return point.x_disc, point.y_disc

    def locate(self, x: float, z: float) -> Tuple[ChartId, np.ndarray, int]:
        """Carta e coordenadas de um ponto do plano"""
        if max(abs(x), abs(z)) <= self.box:
            return ChartId.U3, np.array([x, z], dtype=float), 1
        chart = ChartId.U1 if abs(x) >= abs(z) else ChartId.U2
        u, v = plane_to_chart(chart, x, z)
        return chart, np.array([u, v], dtype=float), _side(v)

    def locate_disc(self, point: DiscPoint) -> Tuple[ChartId, np.ndarray, int]:
        X, Y = point.x_disc, point.y_disc
        r2 = X * X + Y * Y
        if r2 < 1.0 - 1e-15:
            scale = 1.0 / math.sqrt(1.0 - r2)
            return self.locate(X * scale, Y * scale)
        if abs(X) >= abs(Y):
            return ChartId.U1, np.array([Y / X, 0.0]), _side(X)
        return ChartId.U2, np.array([X / Y, 0.0]), _side(Y)

    def _switch(self, chart: ChartId, y: np.ndarray, side: int) -> Tuple[ChartId, np.ndarray, int]:
        a, b = float(y[0]), float(y[1])
        if chart is ChartId.U3:
            return self.locate(a, b)
        if abs(b) > 2.0 / self.box:
            return self.locate(*chart_to_plane(chart, a, b))
        other = ChartId.U2 if chart is ChartId.U1 else ChartId.U1
        new_side = side * _side(a) if b == 0.0 else _side(b / a)
        return other, np.array([1.0 / a, b / a]), new_side

    def distance_to(self, name: str, chart: ChartId, y, side: int) -> float:
        """Distância ao ponto nomeado nas coordenadas da carta ativa (inf se não comparável)"""
        if name in self.finite_plane:
            if chart is not ChartId.U3:
                return math.inf
            px, pz = self.finite_plane[name]
            return math.hypot(float(y[0]) - px, float(y[1]) - pz)
        base = ChartId.U1 if name.endswith("1") else ChartId.U2
        expected = 1 if name.startswith("O") else -1
        if chart is not base or side != expected:
            return math.inf
        return math.hypot(float(y[0]), float(y[1]))

    def capture_radius(self, name: str) -> float:
        if name in self.degenerate:
            return self.config.degenerate_capture_radius
        return self.config.capture_radius

    def captured(self, chart: ChartId, y, side: int, skip: Optional[str] = None) -> Optional[str]:
        for name in list(self.finite_plane) + list(INFINITE_POINTS):
            if name != skip and self.distance_to(name, chart, y, side) < self.capture_radius(name):
                return name
        return None

    def advance(self, chart: ChartId, y, forward: bool, max_steps: int,
                stop: Callable[[np.ndarray], Optional[str]]) -> IntegrationResult:
        """Trecho numa carta: RKF45 e, se o passo desabar, Radau até o fim do trecho"""
        f = self.field(chart, forward)
        result = self.rkf.integrate(f, y, max_steps=max_steps, stop=stop)
        if result.reason != "stiff" or result.steps >= max_steps:
            return result
        logger.debug(f"Passo desabou em {chart.value} após {result.steps} passos; seguindo com Radau")
        tail = radau_integrate(f, result.points[-1], max_steps=max_steps - result.steps, stop=stop,
                               h_max=self.rkf.h_max, rtol=self.config.rtol, atol=self.config.atol)
        result.points.extend(tail.points[1:])
        result.steps += tail.steps
        result.arc_length += tail.arc_length
        result.reason = tail.reason
        return result

    def integrate(self, chart: ChartId, y, side: int, forward: bool = True,
                  budget: Optional[int] = None, source: Optional[str] = None) -> Orbit:
        """
        Integra a partir de coordenadas de carta até um ponto singular ou o fim do orçamento

        Args:
            chart, y, side: estado inicial (carta, coordenadas, hemisfério)
            forward: sentido do tempo
            budget: passos aceitos no total
            source: ponto de partida de uma separatriz, ignorado até a órbita se afastar

        Returns:
            Orbit com a terminação registrada
        """
        budget = budget or self.config.max_steps
        y = np.asarray(y, dtype=float)
        points = [self.disc(chart, y, side)]
        start_gap = self.distance_to(source, chart, y, side) if source else math.inf
        state = {'side': side, 'released': not math.isfinite(start_gap) or start_gap == 0.0}
        # só conta como chegada à origem depois de sair do seu raio de captura
        release_gap = max(4.0 * start_gap, 2.0 * self.capture_radius(source)) if source else math.inf

        target = self.captured(chart, y, side, skip=None if state['released'] else source)
        if target is not None:
            return Orbit(np.array(points), Termination.REACHED_SINGULARITY, target, source, forward)

        used = 0
        while used < budget:
            active = chart

            def stop(current: np.ndarray) -> Optional[str]:
                a, b = float(current[0]), float(current[1])
                if active is not ChartId.U3 and b != 0.0:
                    state['side'] = _side(b)
                if not state['released']:
                    gap = self.distance_to(source, active, current, state['side'])
                    if gap > release_gap:
                        state['released'] = True
                    elif gap < 0.25 * start_gap:
                        return f"captured:{source}"
                hit = self.captured(active, current, state['side'], skip=None if state['released'] else source)
                if hit is not None:
                    return f"captured:{hit}"
                if active is ChartId.U3:
                    if max(abs(a), abs(b)) > self.box:
                        return "switch"
                    return None
                if abs(a) > 2.0 or abs(b) > 2.0 / self.box:
                    return "switch"
                return None

            result = self.advance(chart, y, forward, budget - used, stop)
            used += max(result.steps, 1)
            for current in result.points[1:]:
                points.append(self.disc(chart, current, state['side']))
            y = result.points[-1]

            if result.reason.startswith("captured:"):
                target = result.reason.split(":", 1)[1]
                return Orbit(np.array(points), Termination.REACHED_SINGULARITY, target, source, forward)
            if result.reason == "switch":
                chart, y, side = self._switch(chart, y, state['side'])
                state['side'] = side
            else:
                break

        if chart is not ChartId.U3 and y[1] == 0.0:
            return Orbit(np.array(points), Termination.REACHED_INFINITY, _equator_arc(*points[-1]), source, forward)
        return Orbit(np.array(points), Termination.STEP_LIMIT, None, source, forward)


def _axis_disc(t: float) -> float:
    if math.isinf(t):
        return math.copysign(1.0, t)
    return t / math.sqrt(1.0 + t * t)


def _axis_midpoint(ta: float, tb: float) -> float:
    if math.isinf(ta):
        return tb - 1.0
    if math.isinf(tb):
        return ta + 1.0
    return 0.5 * (ta + tb)


class PortraitBuilder:
    """Constrói a configuração de separatrizes de um ponto do espaço de parâmetros"""

    def __init__(self, params: KolmogorovParams, config: Optional[AnalysisConfig] = None,
                 finite: Optional[List[SingularPoint]] = None):
        self.params = params
        self.config = config or AnalysisConfig()
        self.finite = finite if finite is not None else classify_finite_generic(
            params, max_order=self.config.center_manifold_max_order)
        for point in self.finite:
            if point.local_type in (None, LocalType.DEGENERATE):
                raise UnresolvedDegenerate(f"{point.name} sem tipo resolvido em {params.label()}")
        self.o2_type = o2_classify(params)
        self.system = build_system(params)
        self.flow = DiscFlow(params, self.config, {p.name: p.float_location() for p in self.finite},
                             degenerate=[p.name for p in self.finite if p.local_type in SEMI_HYPERBOLIC])
        self._o1_axis_cache: Dict[int, bool] = {}
        self.last_configuration: Optional[SeparatrixConfiguration] = None

    # -- pontos e arcos ---------------------------------------------------

    def _point_items(self) -> List[Separatrix]:
        items = []
        for point in self.finite:
            disc = self.flow.disc(ChartId.U3, point.float_location(), 1)
            items.append(Separatrix(SeparatrixKind.SINGULAR_POINT, point.name, position=disc))
        for name in EQUATOR_ORDER:
            items.append(Separatrix(SeparatrixKind.SINGULAR_POINT, name, position=INFINITE_POINTS[name]))
        return items

    def _equator_arcs(self) -> List[Separatrix]:
        u1 = self.flow.systems[ChartId.U1]
        items = []
        for k in range(4):
            start, end = EQUATOR_ORDER[k], EQUATOR_ORDER[(k + 1) % 4]
            theta = np.linspace(k * math.pi / 2.0, (k + 1) * math.pi / 2.0, 61)
            mid = (k + 0.5) * math.pi / 2.0
            side = _side(math.cos(mid))
            u_dot, _ = u1.evaluate(math.tan(mid), 0.0)
            # dtheta/dt tem o sinal de u' vezes side^(d-1)
            if u_dot * side ** (self.flow.degree - 1) < 0:
                theta = theta[::-1]
                start, end = end, start
            points = np.column_stack([np.cos(theta), np.sin(theta)])
            orbit = Orbit(points, Termination.REACHED_SINGULARITY, end, start, True)
            items.append(Separatrix(SeparatrixKind.INFINITY_ARC, f"{start}-{end}", (start, end), orbit))
        return items

    # -- eixos invariantes ------------------------------------------------

    def o1_axis_is_separatrix(self, side: int) -> bool:
        """O semieixo x que chega a O1 (side=1) ou V1 (side=-1) é separatriz?"""
        if side not in self._o1_axis_cache:
            self._o1_axis_cache[side] = o1_axis_separatrix(self.params, side)
        return self._o1_axis_cache[side]

    def _end_is_separatrix(self, point: Optional[SingularPoint], name: str,
                           direction: Tuple[float, float]) -> bool:
        if point is None:
            if name in ("O2", "V2"):
                return self.o2_type is LocalType.SADDLE
            return self.o1_axis_is_separatrix(1 if name == "O1" else -1)
        kind = point.local_type
        if kind in SADDLE_LIKE:
            return True
        if kind is LocalType.SADDLE_NODE:
            hd = point.hyperbolic_direction
            if hd is None:
                logger.warning(f"{point.name}: sela-nó sem lado hiperbólico, eixo considerado separatriz")
                return True
            cross = direction[0] * hd[1] - direction[1] * hd[0]
            if abs(cross) > 1e-9 * math.hypot(*hd):
                # direção forte
                return True
            return direction[0] * hd[0] + direction[1] * hd[1] > 0
        return False

    def _axis_orbit(self, axis: int, name_a: str, ta: float, name_b: str, tb: float) -> Separatrix:
        da, db = _axis_disc(ta), _axis_disc(tb)
        count = max(2, int(math.ceil(abs(db - da) / 0.01)) + 1)
        coords = np.linspace(da, db, count)
        zeros = np.zeros(count)
        points = np.column_stack([coords, zeros]) if axis == 0 else np.column_stack([zeros, coords])
        mid = _axis_midpoint(ta, tb)
        fx, fz = self.system.evaluate(mid, 0.0) if axis == 0 else self.system.evaluate(0.0, mid)
        along = fx if axis == 0 else fz
        source, target = name_a, name_b
        if along < 0:
            points = points[::-1]
            source, target = target, source
        orbit = Orbit(points, Termination.REACHED_SINGULARITY, target, source, True)
        return Separatrix(SeparatrixKind.BOUNDARY_ORBIT, f"{source}->{target}", (source, target), orbit)

    def _axis_segments(self) -> List[Separatrix]:
        items = []
        for axis, (low, high) in ((0, ("V1", "O1")), (1, ("V2", "O2"))):
            on_axis = [p for p in self.finite if p.location[1 - axis] == 0]
            on_axis.sort(key=lambda p: float(p.location[axis]))
            vertices = [(low, -math.inf, None)]
            vertices += [(p.name, float(p.location[axis]), p) for p in on_axis]
            vertices += [(high, math.inf, None)]
            unit = (1.0, 0.0) if axis == 0 else (0.0, 1.0)
            for (name_a, ta, pa), (name_b, tb, pb) in zip(vertices, vertices[1:]):
                from_a = self._end_is_separatrix(pa, name_a, unit)
                from_b = self._end_is_separatrix(pb, name_b, (-unit[0], -unit[1]))
                if from_a or from_b:
                    items.append(self._axis_orbit(axis, name_a, ta, name_b, tb))
        return items

    # -- retas invariantes z = z_i (c1 = 0) -------------------------------

    def _line_half(self, point: SingularPoint, z: float, sx: int) -> Separatrix:
        s = np.linspace(0.0, 18.0, 1200)
        scale = math.sqrt(1.0 + z * z)
        points = np.column_stack([sx * np.tanh(s), z / (scale * np.cosh(s))])
        points = np.vstack([points, [float(sx), 0.0]])
        end = "O1" if sx > 0 else "V1"
        fx, _ = self.system.evaluate(float(sx), z)
        source, target = point.name, end
        if fx * sx < 0:
            points = points[::-1]
            source, target = target, source
        orbit = Orbit(points, Termination.REACHED_SINGULARITY, target, source, True)
        return Separatrix(SeparatrixKind.BOUNDARY_ORBIT, f"{source}->{target}", (source, target), orbit)

    def _invariant_line_halves(self) -> List[Separatrix]:
        if self.params.c1 != 0:
            return []
        divisor = divisor_point_types(self.params)
        items = []
        for root in invariant_lines(self.params):
            z = float(root)
            s_type = None
            for label, (location, kind) in divisor.items():
                if label != "S0" and abs(float(location[1]) - 1.0 / z) < 1e-9:
                    s_type = kind
            if s_type not in WITH_SEPARATRICES:
                continue
            point = next((p for p in self.finite
                          if p.location[0] == 0 and abs(float(p.location[1]) - z) < 1e-12), None)
            if point is None or point.local_type in SADDLE_LIKE:
                # ramos horizontais de uma sela finita já são traçados
                continue
            for sx in (1, -1):
                items.append(self._line_half(point, z, sx))
        return items

    # -- ramos traçados ---------------------------------------------------

    def _on_axis(self, point: SingularPoint, e: np.ndarray) -> bool:
        if point.location[1] == 0 and abs(e[1]) < 1e-12:
            return True
        return point.location[0] == 0 and abs(e[0]) < 1e-12

    def _finite_branch_specs(self) -> List[Tuple[SingularPoint, np.ndarray, bool]]:
        specs = []
        for point in self.finite:
            kind = point.local_type
            if kind not in WITH_SEPARATRICES:
                continue
            J = np.array([[float(v) for v in row] for row in self.system.jacobian(point.float_location())])
            values, vectors = np.linalg.eig(J)
            if np.any(np.abs(np.imag(values)) > 1e-12):
                continue
            values, vectors = np.real(values), np.real(vectors)
            strong = values[int(np.argmax(np.abs(values)))]
            for idx in range(2):
                lam = values[idx]
                e = vectors[:, idx] / np.linalg.norm(vectors[:, idx])
                if self._on_axis(point, e):
                    continue
                is_center = abs(lam) <= 1e-12 * max(1.0, abs(strong))
                for s in (1.0, -1.0):
                    direction = s * e
                    if kind is LocalType.SADDLE_NODE and is_center:
                        hd = point.hyperbolic_direction
                        if hd is None or float(np.dot(direction, hd)) <= 0:
                            continue
                    forward = bool(strong < 0) if is_center else bool(lam > 0)
                    specs.append((point, direction, forward))
        return specs

    def _trace_from(self, point: SingularPoint, direction: np.ndarray, forward: bool) -> Orbit:
        base = point.float_location()
        eps = self.config.separatrix_epsilon
        orbit = None
        for _ in range(4):
            start = (base[0] + eps * direction[0], base[1] + eps * direction[1])
            chart, y, side = self.flow.locate(*start)
            orbit = self.flow.integrate(chart, y, side, forward=forward, source=point.name)
            if orbit.target != point.name:
                break
            logger.debug(f"Ramo de {point.name} voltou ao ponto de partida; eps -> {eps / 2}")
            eps /= 2.0
        orbit.points = np.vstack([[self.flow.disc(ChartId.U3, base, 1)], orbit.points])
        return orbit

    def _blowup_branch_specs(self) -> List[Tuple[np.ndarray, int, bool, str]]:
        """
        Ramos que saem de O1/V1 pelo divisor da segunda explosão: variedade
        central de Q1 (sela topológica) ou as quatro semivariedades de R (sela)

        Returns:
            Lista (estado inicial em U1, lado, sentido em U1, ponto de origem)
        """
        params = self.params
        if params.c1 == 0:
            return []
        divisor = divisor_point_types(params)
        blown = family_chain(params)["blown_2"]
        if "Q1" in divisor:
            location, kind = divisor["Q1"]
            center_only, power = True, 2
            if kind is not LocalType.TOPOLOGICAL_SADDLE:
                return []
        else:
            location, kind = divisor["R"]
            center_only, power = False, 3
            if kind is not LocalType.SADDLE:
                return []

        base = np.array([float(location[0]), float(location[1])])
        J = np.array([[float(v) for v in row] for row in blown.jacobian((float(base[0]), float(base[1])))])
        values, vectors = np.linalg.eig(J)
        values, vectors = np.real(values), np.real(vectors)
        strong = values[int(np.argmax(np.abs(values)))]
        delta = self.config.blowup_offset
        specs = []
        for idx in range(2):
            lam = values[idx]
            is_center = abs(lam) <= 1e-12 * max(1.0, abs(strong))
            e = vectors[:, idx] / np.linalg.norm(vectors[:, idx])
            if (center_only and not is_center) or abs(e[0]) < 1e-12:
                # ramo contido no divisor
                continue
            forward = bool(strong < 0) if is_center else bool(lam > 0)
            for s in (1.0, -1.0):
                u, w = base + delta * s * e
                v = u * u * w
                side = _side(v)
                # o campo explodido difere do de U1 pelo fator u^power
                forward_u1 = forward if (power % 2 == 0 or u > 0) else not forward
                specs.append((np.array([u, v]), side, forward_u1, "O1" if side > 0 else "V1"))
        return specs

    def _trace_blowup(self, start: np.ndarray, side: int, forward: bool, origin: str) -> Orbit:
        orbit = self.flow.integrate(ChartId.U1, start, side, forward=forward, source=origin)
        orbit.points = np.vstack([[INFINITE_POINTS[origin]], orbit.points])
        return orbit

    # -- montagem ---------------------------------------------------------

    def _deduplicate(self, items: List[Separatrix]) -> Tuple[List[Separatrix], int]:
        kept: List[Separatrix] = []
        dropped = 0
        for item in items:
            duplicate = False
            for other in kept:
                if other.orbit.endpoint_key != item.orbit.endpoint_key:
                    continue
                if polyline_hausdorff(other.orbit.points, item.orbit.points) < self.config.dedup_tolerance:
                    duplicate = True
                    break
            if duplicate:
                dropped += 1
            else:
                kept.append(item)
        return kept, dropped

    def trace(self) -> SeparatrixConfiguration:
        """Monta pontos, arcos e órbitas separatrizes; R pela fórmula de Euler"""
        exact = self._axis_segments() + self._invariant_line_halves()

        specs = self._finite_branch_specs()
        blowup_specs = self._blowup_branch_specs()
        with ThreadPoolExecutor(max_workers=self.config.threads) as executor:
            finite_orbits = list(executor.map(lambda item: self._trace_from(*item), specs))
            blowup_orbits = list(executor.map(lambda item: self._trace_blowup(*item), blowup_specs))

        traced = []
        for orbit in finite_orbits + blowup_orbits:
            if orbit.termination is not Termination.REACHED_SINGULARITY:
                raise SeparatrixNotTerminated(orbit.source, orbit.termination.value, self.params.label())
            name = f"{orbit.source}->{orbit.target}"
            traced.append(Separatrix(SeparatrixKind.BOUNDARY_ORBIT, name, (orbit.source, orbit.target), orbit))

        orbits, dropped = self._deduplicate(exact + traced)
        configuration = SeparatrixConfiguration(
            separatrices=self._point_items() + self._equator_arcs() + orbits,
            discarded_duplicates=dropped,
        )
        configuration.r_count = configuration.euler_region_count()
        try:
            count, samples = label_regions(configuration, self.config)
            configuration.r_count_raster = count
            configuration.regions = samples
        except ResolutionInsufficient as e:
            logger.warning(f"Flood fill indisponível: {e}")

        logger.info(f"Separatrizes de {self.params.label()}: S={configuration.s_count}, "
                    f"R={configuration.r_count} (raster {configuration.r_count_raster})")
        self.last_configuration = configuration
        return configuration


# ---------------------------------------------------------------------------
# Contagem de regiões por flood fill
# ---------------------------------------------------------------------------

def _to_pixels(points: np.ndarray, n: int) -> Tuple[np.ndarray, np.ndarray]:
    cols = np.clip(((points[:, 0] + 1.0) * 0.5 * n).astype(int), 0, n - 1)
    rows = np.clip(((1.0 - points[:, 1]) * 0.5 * n).astype(int), 0, n - 1)
    return rows, cols


def _check_resolution(configuration: SeparatrixConfiguration, n: int) -> None:
    pixel = 2.0 / n
    singular = np.array([s.position for s in configuration.of_kind(SeparatrixKind.SINGULAR_POINT)])
    near_point = cKDTree(singular) if len(singular) else None
    orbits = configuration.orbits()
    dense = []
    for orbit in orbits:
        pts = _densify(orbit.points, 0.5 * pixel)
        keep = np.hypot(pts[:, 0], pts[:, 1]) < 1.0 - 16 * pixel
        if near_point is not None:
            keep &= near_point.query(pts)[0] > 16 * pixel
        dense.append(pts[keep])
    for i in range(len(dense)):
        if not len(dense[i]):
            continue
        tree = cKDTree(dense[i])
        for j in range(i + 1, len(dense)):
            if not len(dense[j]):
                continue
            if {orbits[i].source, orbits[i].target} & {orbits[j].source, orbits[j].target}:
                # órbitas que chegam ao mesmo ponto se aproximam exponencialmente
                continue
            distances = tree.query(dense[j], distance_upper_bound=4 * pixel)[0]
            close = int(np.sum(np.isfinite(distances)))
            if close * 0.5 * pixel > 4 * pixel:
                raise ResolutionInsufficient(
                    f"Separatrizes {i} e {j} a menos de 4 pixels ao longo de {close} amostras")


def label_regions(configuration: SeparatrixConfiguration,
                  config: Optional[AnalysisConfig] = None) -> Tuple[int, List[Tuple[float, float]]]:
    """
    Rasteriza as separatrizes e rotula as componentes do complemento no disco

    Returns:
        (número de regiões, um ponto representativo por região em coordenadas do disco)
    """
    config = config or AnalysisConfig()
    n = config.grid_resolution
    _check_resolution(configuration, n)

    barrier = np.zeros((n, n), dtype=bool)
    for line in configuration.polylines():
        rows, cols = _to_pixels(_densify(line, 0.5 * 2.0 / n), n)
        barrier[rows, cols] = True
    width = max(1, config.line_width_px)
    if width > 1:
        barrier = ndimage.binary_dilation(barrier, structure=np.ones((width, width), dtype=bool))

    centers = (np.arange(n) + 0.5) / n * 2.0 - 1.0
    xs, ys = np.meshgrid(centers, -centers)
    outside = np.hypot(xs, ys) > 1.0 - width * 2.0 / n
    free = ~(barrier | outside)

    labels, count = ndimage.label(free)
    if count == 0:
        return 0, []
    sizes = ndimage.sum(free, labels, index=np.arange(1, count + 1))
    valid = [k + 1 for k, size in enumerate(sizes) if size >= config.min_region_pixels]
    distance = ndimage.distance_transform_edt(free)
    samples = []
    for label in valid:
        row, col = ndimage.maximum_position(distance, labels, label)
        samples.append((float(centers[col]), float(-centers[row])))
    logger.debug(f"Flood fill: {count} componentes, {len(valid)} acima de {config.min_region_pixels} pixels")
    return len(valid), samples


def count_regions(configuration: SeparatrixConfiguration, grid_resolution: Optional[int] = None,
                  config: Optional[AnalysisConfig] = None) -> int:
    """Número de regiões canônicas pelo flood fill"""
    config = config or AnalysisConfig()
    if grid_resolution is not None and grid_resolution != config.grid_resolution:
        config = AnalysisConfig(**{**config.to_dict(), 'grid_resolution': grid_resolution})
    count, _ = label_regions(configuration, config)
    return count


# ---------------------------------------------------------------------------
# Funções de módulo
# ---------------------------------------------------------------------------

def _known_points(params: KolmogorovParams) -> Dict[str, Tuple[float, float]]:
    try:
        return {p.name: p.float_location() for p in finite_points(params)}
    except HypothesisViolation:
        logger.debug(f"{params.label()} fora de H1: integração sem captura de pontos finitos")
        return {}


def integrate_orbit(params: KolmogorovParams, start: DiscPoint, forward: bool = True,
                    budget: Optional[int] = None, config: Optional[AnalysisConfig] = None,
                    known_points: Optional[Dict[str, Tuple[float, float]]] = None) -> Orbit:
    """
    Órbita do campo compactificado a partir de um ponto do disco

    Args:
        params: parâmetros da família
        start: ponto inicial no disco (interior ou conjunto invariante)
        forward: sentido do tempo
        budget: limite de passos (max_steps por padrão)
        known_points: pontos finitos para captura (calculados a partir de params por padrão)

    Returns:
        Orbit com a terminação registrada
    """
    config = config or AnalysisConfig()
    known = known_points if known_points is not None else _known_points(params)
    flow = DiscFlow(params, config, known)
    chart, y, side = flow.locate_disc(start)
    return flow.integrate(chart, y, side, forward=forward, budget=budget)


def trace_separatrices(params: KolmogorovParams, config: Optional[AnalysisConfig] = None,
                       finite: Optional[List[SingularPoint]] = None) -> SeparatrixConfiguration:
    """Configuração de separatrizes de params (requer H2 e pontos finitos resolvidos)"""
    return PortraitBuilder(params, config, finite).trace()


def _svg_xy(point: Sequence[float], options: RenderOptions) -> Tuple[float, float]:
    radius = options.size / 2.0 - options.margin
    center = options.size / 2.0
    return center + radius * float(point[0]), center - radius * float(point[1])


def _arrow_at_middle(svg: SVG, orbit: Orbit, options: RenderOptions) -> None:
    if len(orbit.points) < 3:
        return
    k = len(orbit.points) // 2
    a = _svg_xy(orbit.points[k - 1], options)
    b = _svg_xy(orbit.points[k + 1], options)
    dx, dy = b[0] - a[0], b[1] - a[1]
    norm = math.hypot(dx, dy)
    if norm == 0.0:
        return
    sign = 1.0 if orbit.forward else -1.0
    svg.arrow(_svg_xy(orbit.points[k], options), (sign * dx / norm, sign * dy / norm))


def render_svg(params: KolmogorovParams, configuration: SeparatrixConfiguration,
               options: Optional[RenderOptions] = None, config: Optional[AnalysisConfig] = None) -> str:
    """
    Desenha o retrato no disco: fronteira, separatrizes com setas, uma órbita
    de amostra por região e pontos singulares

    Returns:
        Documento SVG 1.1
    """
    options = options or RenderOptions()
    config = config or AnalysisConfig()
    svg = SVG()
    svg.header(options.size, options.size)

    title = options.title
    if title is None and options.labels:
        parts = [p for p in (options.g_label, options.subcase) if p]
        parts.append(f"[R={configuration.r_count}, S={configuration.s_count}]")
        title = " ".join(parts)
    attrs = {'id': 'portrait'}
    if title:
        attrs['title'] = title
    svg.group_start(attrs)
    svg.filled_rectangle(0, 0, options.size, options.size, "white")

    center = options.size / 2.0
    svg.circle(center, center, options.size / 2.0 - options.margin, stroke="black", extra='stroke-width="1.5"')

    if options.sample_orbits and configuration.regions:
        flow = DiscFlow(params, config, _known_points(params))
        svg.group_start({'id': 'samples', 'class': 'sample'})
        for sample in configuration.regions:
            chart, y, side = flow.locate_disc(DiscPoint(*sample))
            ahead = flow.integrate(chart, y, side, forward=True, budget=options.sample_steps)
            behind = flow.integrate(chart, y, side, forward=False, budget=options.sample_steps)
            points = np.vstack([behind.points[::-1], ahead.points[1:]])
            svg.polyline([_svg_xy(p, options) for p in points], stroke="#888888", width=0.6)
        svg.group_end()

    svg.group_start({'id': 'separatrices', 'class': 'separatrix'})
    for item in configuration.separatrices:
        if item.orbit is None or item.kind is not SeparatrixKind.BOUNDARY_ORBIT:
            continue
        svg.polyline([_svg_xy(p, options) for p in item.orbit.points], stroke="black", width=1.4)
        _arrow_at_middle(svg, item.orbit, options)
    svg.group_end()

    svg.group_start({'id': 'points', 'class': 'singular'})
    for item in configuration.of_kind(SeparatrixKind.SINGULAR_POINT):
        x, y = _svg_xy(item.position, options)
        svg.circle(x, y, 3.5, fill="black")
        if options.labels:
            svg.string_ttf(None, x + 5, f"{y - 5:.2f}", item.name, 'font-size="11" font-family="serif"')
    svg.group_end()

    if options.labels and title:
        svg.string_ttf("caption", options.margin, f"{options.size - 4:.2f}", title, 'font-size="13"')
    svg.group_end()
    return svg.get_svg()
