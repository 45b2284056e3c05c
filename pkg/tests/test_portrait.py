"""
Testes para a integração no disco, a contagem de regiões e o desenho SVG
"""

import unittest
import xml.etree.ElementTree as ET
from pathlib import Path
import sys

import numpy as np

# Adicionar src ao path
sys.path.insert(0, str(Path(__file__).parent.parent / 'src'))

from compactify import DiscPoint
from config import AnalysisConfig
from exceptions import SeparatrixNotTerminated
from family import KolmogorovParams, SymmetryOp
from portrait import (
    INFINITE_POINTS, Orbit, RenderOptions, Separatrix, SeparatrixConfiguration, SeparatrixKind,
    Termination, _equator_arc, count_regions, integrate_orbit, polyline_hausdorff, render_svg,
    trace_separatrices,
)
from singular import finite_points
from tables import load_tables

SVG_NS = '{http://www.w3.org/2000/svg}'


def saddle_configuration() -> SeparatrixConfiguration:
    """Sela linear na origem com as quatro separatrizes nos eixos"""
    items = [Separatrix(SeparatrixKind.SINGULAR_POINT, "P0", position=(0.0, 0.0))]
    for name, position in INFINITE_POINTS.items():
        items.append(Separatrix(SeparatrixKind.SINGULAR_POINT, name, position=position))
    order = ["O1", "O2", "V1", "V2"]
    for k in range(4):
        start, end = order[k], order[(k + 1) % 4]
        theta = np.linspace(k * np.pi / 2.0, (k + 1) * np.pi / 2.0, 61)
        points = np.column_stack([np.cos(theta), np.sin(theta)])
        orbit = Orbit(points, Termination.REACHED_SINGULARITY, end, start)
        items.append(Separatrix(SeparatrixKind.INFINITY_ARC, f"{start}-{end}", (start, end), orbit))
    for name, (x, y) in INFINITE_POINTS.items():
        t = np.linspace(0.0, 1.0, 101)
        points = np.column_stack([t * x, t * y])
        orbit = Orbit(points, Termination.REACHED_SINGULARITY, name, "P0")
        items.append(Separatrix(SeparatrixKind.BOUNDARY_ORBIT, f"P0->{name}", ("P0", name), orbit))
    return SeparatrixConfiguration(separatrices=items)


class TestRegionCount(unittest.TestCase):

    def setUp(self):
        self.configuration = saddle_configuration()

    def test_euler_count(self):
        """Testa R = E - V + C para a sela"""
        self.assertEqual(self.configuration.s_count, 13)
        self.assertEqual(self.configuration.euler_region_count(), 4)

    def test_flood_fill_agrees(self):
        """Testa o flood fill em grade reduzida"""
        self.assertEqual(count_regions(self.configuration, grid_resolution=256), 4)

    def test_dangling_curve_does_not_split(self):
        """Testa curva com extremidade desconhecida"""
        orbit = Orbit(np.array([[0.0, 0.0], [0.3, 0.3]]), Termination.STEP_LIMIT, None, "P0")
        self.configuration.separatrices.append(
            Separatrix(SeparatrixKind.BOUNDARY_ORBIT, "P0->?", ("P0", None), orbit))
        self.assertEqual(self.configuration.euler_region_count(), 4)


class TestHelpers(unittest.TestCase):

    def test_equator_arc(self):
        """Testa o arco do equador de um ponto do círculo"""
        self.assertEqual(_equator_arc(0.7, 0.7), "O1-O2")
        self.assertEqual(_equator_arc(-0.7, 0.7), "O2-V1")
        self.assertEqual(_equator_arc(0.7, -0.7), "V2-O1")

    def test_hausdorff(self):
        """Testa distância entre segmentos paralelos e de uma poligonal a si mesma"""
        a = np.array([[0.0, 0.0], [1.0, 0.0]])
        b = np.array([[0.0, 0.1], [1.0, 0.1]])
        self.assertAlmostEqual(polyline_hausdorff(a, b, spacing=0.01), 0.1, places=9)
        self.assertAlmostEqual(polyline_hausdorff(a, a), 0.0, places=12)


class TestOrbits(unittest.TestCase):

    def setUp(self):
        self.params = KolmogorovParams(1, -1, 1, 1, 3, 2)

    def test_start_at_singular_point(self):
        """Testa órbita de comprimento nulo sobre P0"""
        orbit = integrate_orbit(self.params, DiscPoint(0.0, 0.0))
        self.assertIs(orbit.termination, Termination.REACHED_SINGULARITY)
        self.assertEqual(orbit.target, "P0")
        self.assertEqual(len(orbit.points), 1)
        self.assertEqual(orbit.length, 0.0)

    def test_x_axis_is_invariant(self):
        """Testa que a órbita iniciada no eixo x não sai dele"""
        orbit = integrate_orbit(KolmogorovParams(1, 1, 0, 1, 0, 1), DiscPoint(0.3, 0.0), budget=2000)
        self.assertTrue(np.all(orbit.points[:, 1] == 0.0))

    def test_flip_x_mirrors_orbit(self):
        """Testa que FlipX espelha a órbita"""
        start = DiscPoint(0.4, 0.05)
        mirrored_start = DiscPoint(*SymmetryOp.FLIP_X.map_point(start.x_disc, start.y_disc))
        known = {p.name: p.float_location() for p in finite_points(self.params)}
        # os parâmetros espelhados saem de H (c1 < 0): os pontos são passados explicitamente
        mirrored_known = {name: SymmetryOp.FLIP_X.map_point(*xz) for name, xz in known.items()}
        orbit = integrate_orbit(self.params, start, budget=3000, known_points=known)
        mirrored = integrate_orbit(SymmetryOp.FLIP_X.apply(self.params), mirrored_start, budget=3000,
                                   known_points=mirrored_known)
        self.assertEqual(orbit.target, "P4")
        self.assertEqual(mirrored.target, "P4")
        expected = orbit.points * np.array([-1.0, 1.0])
        np.testing.assert_allclose(mirrored.points, expected, atol=1e-12)


class TestRenderSvg(unittest.TestCase):

    def test_document_and_title(self):
        """Testa SVG bem formado com o rótulo no título"""
        configuration = saddle_configuration()
        configuration.r_count = 4
        options = RenderOptions(sample_orbits=False, g_label="G19", subcase="1.9")
        document = render_svg(KolmogorovParams(1, -1, 1, 1, 3, 2), configuration, options,
                              AnalysisConfig(grid_resolution=256))
        root = ET.fromstring(document)
        self.assertEqual(root.tag, f"{SVG_NS}svg")
        title = root.find(f"{SVG_NS}g/{SVG_NS}title")
        self.assertEqual(title.text, "G19 1.9 [R=4, S=13]")
        separatrices = root.find(f".//{SVG_NS}g[@id='separatrices']")
        self.assertEqual(len(separatrices.findall(f"{SVG_NS}polyline")), 4)
        points = root.find(f".//{SVG_NS}g[@id='points']")
        self.assertEqual(len(points.findall(f"{SVG_NS}circle")), 5)


class TestDesignatedWitnesses(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.tables = load_tables()

    def test_traced_counts_match_captions(self):
        """Testa S e R do traçado completo contra a legenda [R, S] de cada testemunha"""
        for g_label in ("G1", "G19", "G50", "G94", "G95"):
            with self.subTest(g_label=g_label):
                params = KolmogorovParams.from_mapping(self.tables.raw.designated_witnesses[g_label])
                configuration = trace_separatrices(params)
                r_caption, s_caption = self.tables.caption(g_label)
                self.assertEqual(configuration.s_count, s_caption)
                self.assertEqual(configuration.r_count, r_caption)
                self.assertEqual(count_regions(configuration), r_caption)

    def test_every_branch_reaches_a_singular_point(self):
        """Testa que nenhuma órbita separatriz fica pendente"""
        params = KolmogorovParams.from_mapping(self.tables.raw.designated_witnesses["G50"])
        configuration = trace_separatrices(params)
        for orbit in configuration.orbits():
            self.assertIs(orbit.termination, Termination.REACHED_SINGULARITY)
            self.assertIsNotNone(orbit.target)

    def test_unterminated_separatrix_raises(self):
        """Testa a falha explícita quando o orçamento acaba antes de um ponto singular"""
        with self.assertRaises(SeparatrixNotTerminated):
            trace_separatrices(KolmogorovParams(1, -1, 1, 1, 3, 2), AnalysisConfig(max_steps=5))


if __name__ == '__main__':
    unittest.main()
