"""
Testes para índices de Poincaré e o balanço de Poincaré-Hopf
"""

import unittest
from pathlib import Path
import sys

# Adicionar src ao path
sys.path.insert(0, str(Path(__file__).parent.parent / 'src'))

from exceptions import OddSectorDifference, SingularOnCircle
from family import KolmogorovParams
from index import (
    SectorDecomposition, numerical_index_ledger, poincare_hopf_check, sector_index, winding_index,
)
from poly_core import PlanarSystem, parse_poly


class TestWindingIndex(unittest.TestCase):

    def test_elementary_points(self):
        """Testa sela, nó e foco"""
        saddle = PlanarSystem(parse_poly("x"), parse_poly("-y"))
        node = PlanarSystem(parse_poly("x"), parse_poly("y"))
        focus = PlanarSystem(parse_poly("x - y"), parse_poly("x + y"))
        self.assertEqual(winding_index(saddle, (0.0, 0.0), 0.1), -1)
        self.assertEqual(winding_index(node, (0.0, 0.0), 0.1), 1)
        self.assertEqual(winding_index(focus, (0.0, 0.0), 0.1), 1)

    def test_saddle_node_and_dipole(self):
        """Testa índice 0 da sela-nó e índice 2 de x' = x^2 - y^2, y' = 2xy"""
        saddle_node = PlanarSystem(parse_poly("x^2"), parse_poly("-y"))
        self.assertEqual(winding_index(saddle_node, (0.0, 0.0), 0.1), 0)
        dipole = PlanarSystem(parse_poly("x^2 - y^2"), parse_poly("2*x*y"))
        self.assertEqual(winding_index(dipole, (0.0, 0.0), 0.5), 2)

    def test_off_center(self):
        """Testa círculo centrado fora da origem"""
        shifted = PlanarSystem(parse_poly("x - 1"), parse_poly("-y"))
        self.assertEqual(winding_index(shifted, (1.0, 0.0), 0.2), -1)
        self.assertEqual(winding_index(shifted, (3.0, 0.0), 0.2), 0)

    def test_other_point_inside(self):
        """Testa rejeição de círculo que contém outro ponto singular"""
        system = PlanarSystem(parse_poly("x"), parse_poly("-y"))
        with self.assertRaises(SingularOnCircle):
            winding_index(system, (0.0, 0.0), 0.5, known_points=[(0.0, 0.0), (0.2, 0.0)])

    def test_field_vanishing_on_circle(self):
        """Testa campo nulo sobre o círculo"""
        system = PlanarSystem(parse_poly("x - 1"), parse_poly("y"))
        with self.assertRaises(SingularOnCircle):
            winding_index(system, (0.0, 0.0), 1.0, samples=8)


class TestSectors(unittest.TestCase):

    def test_sector_formula(self):
        """Testa i = 1 + (e - h)/2"""
        self.assertEqual(sector_index(SectorDecomposition(e=0, h=4, p=0)), -1)
        self.assertEqual(sector_index(SectorDecomposition(e=2, h=0, p=2)), 2)
        self.assertEqual(sector_index(SectorDecomposition(e=0, h=0, p=1)), 1)

    def test_invalid_decompositions(self):
        """Testa diferença ímpar e contagens negativas"""
        with self.assertRaises(OddSectorDifference):
            sector_index(SectorDecomposition(e=1, h=0, p=0))
        with self.assertRaises(ValueError):
            SectorDecomposition(e=-1, h=0, p=0)


class TestPoincareHopf(unittest.TestCase):

    def test_ledger_total(self):
        """Testa a contagem dupla dos finitos e dos infinitos com antípoda"""
        ledger = poincare_hopf_check([("P0", -1), ("P1", -1), ("P2", -1), ("P4", 1)],
                                     [("O1", 2), ("O2", 1)])
        self.assertEqual(ledger.total, 2)
        self.assertTrue(ledger.balanced)
        self.assertEqual(ledger.finite_sum, -2)
        self.assertEqual(ledger.index_of("O1"), 2)
        self.assertIsNone(ledger.index_of("P3"))

    def test_unbalanced(self):
        """Testa balanço que não fecha"""
        ledger = poincare_hopf_check([("P0", 1)], [("O1", 1), ("O2", 1)])
        self.assertEqual(ledger.total, 6)
        self.assertFalse(ledger.balanced)
        self.assertEqual(ledger.to_dict()['total'], 6)

    def test_numerical_ledger(self):
        """Testa os índices numéricos de P0, P1, P2, P4, O1 e O2"""
        ledger = numerical_index_ledger(KolmogorovParams(1, -1, 1, 1, 3, 2))
        indices = {entry.name: entry.index for entry in ledger.entries}
        self.assertEqual(indices, {"P0": -1, "P1": -1, "P2": -1, "P4": 1, "O1": 2, "O2": 1})
        self.assertTrue(ledger.balanced)


if __name__ == '__main__':
    unittest.main()
