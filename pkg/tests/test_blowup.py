"""
Testes para as explosões verticais e os pontos singulares no infinito
"""

import unittest
from fractions import Fraction
from pathlib import Path
import sys

# Adicionar src ao path
sys.path.insert(0, str(Path(__file__).parent.parent / 'src'))

from blowup import (
    characteristic_poly, desingularize, divisor_point_types, family_chain,
    family_divisor_points, family_u1_system, horizontal_blowup, o1_axis_separatrix,
    o1_label_from_blowup, o1_signature, o2_classify, o2_closed_form_type, topological_class,
    vertical_blowup,
)
from exceptions import DepthExceeded, HypothesisViolation, NotSingularAtOrigin
from family import KolmogorovParams
from poly_core import PlanarSystem, Poly2, parse_poly
from singular import LocalType
from tables import load_tables

UV = ('u', 'v')
TV = ('t', 'v')


class TestVerticalBlowup(unittest.TestCase):

    def setUp(self):
        self.params = KolmogorovParams(1, -1, 1, 1, 3, 2)
        self.u1 = family_u1_system(self.params)

    def test_characteristic_polynomial(self):
        """Testa F = u Q_2 - v P_2 na origem de U1"""
        self.assertEqual(characteristic_poly(self.u1), parse_poly("-u*v^2", UV))

    def test_characteristic_polynomial_without_c1(self):
        """Testa F = -c2 u^3 v - c3 u^2 v^2 - c0 u v^3 quando c1 = 0"""
        u1 = family_u1_system(KolmogorovParams(1, 1, 0, 1, 0, 1))
        self.assertEqual(characteristic_poly(u1), parse_poly("-u^3*v - u*v^3", UV))

    def test_first_blowup(self):
        """Testa v = u*w com cancelamento de u"""
        blown, power = vertical_blowup(self.u1)
        self.assertEqual(power, 1)
        self.assertEqual(blown.p, parse_poly("-2*u^2*v^2 + 3*u*v + 3*u^2 + 9*u^2*v", UV))
        self.assertEqual(blown.q, parse_poly("u*v^3 - v^2 - u*v - 3*u*v^2", UV))

    def test_dicritical_cancels_full_power(self):
        """Testa o caso dicrítico x' = x, y' = y"""
        blown, power = vertical_blowup(PlanarSystem(parse_poly("x"), parse_poly("y")))
        self.assertEqual(power, 1)
        self.assertEqual(blown.p, Poly2.constant(1))
        self.assertTrue(blown.q.is_zero())

    def test_origin_must_be_singular(self):
        """Testa a exigência de singularidade na origem"""
        with self.assertRaises(NotSingularAtOrigin):
            characteristic_poly(PlanarSystem(parse_poly("1 + x"), parse_poly("y")))

    def test_family_chain_keys(self):
        """Testa os sistemas intermediários com e sem c1"""
        self.assertEqual(list(family_chain(self.params)),
                         ["U1", "substituted_1", "blown_1", "substituted_2", "blown_2"])
        self.assertEqual(list(family_chain(KolmogorovParams(1, 1, 0, 1, 0, 1))),
                         ["U1", "substituted_1", "blown_1"])


class TestDesingularization(unittest.TestCase):

    def setUp(self):
        self.params = KolmogorovParams(1, -1, 1, 1, 3, 2)

    def test_closed_form_divisor(self):
        """Testa Q0 sela e Q1 nó instável topológico"""
        points = divisor_point_types(self.params)
        self.assertEqual(set(points), {"Q0", "Q1"})
        self.assertIs(points["Q0"][1], LocalType.SADDLE)
        self.assertEqual(points["Q1"][0], (0, Fraction(-1)))
        self.assertIs(points["Q1"][1], LocalType.TOPOLOGICAL_UNSTABLE_NODE)

    def test_generic_divisor_agrees(self):
        """Testa a árvore de explosões contra a forma fechada"""
        found = family_divisor_points(self.params)
        self.assertIs(found["Q0"].local_type, LocalType.SADDLE)
        self.assertIs(found["Q1"].local_type, LocalType.TOPOLOGICAL_UNSTABLE_NODE)

    def test_tree_shape(self):
        """Testa duas explosões encadeadas sobre w = 0"""
        tree = desingularize(family_u1_system(self.params))
        self.assertEqual(len(tree.children), 1)
        first = tree.children[0]
        self.assertEqual(first.cancelled_power, 1)
        self.assertFalse(first.dicritical)
        self.assertIs(first.divisor_singularities[0].local_type, LocalType.DEGENERATE)
        self.assertEqual(len(tree.leaves()), 1)
        self.assertEqual(len(tree.leaves()[0].divisor_singularities), 2)

    def test_depth_limit(self):
        """Testa DepthExceeded quando uma explosão não basta"""
        with self.assertRaises(DepthExceeded):
            desingularize(family_u1_system(self.params), max_depth=1)

    def test_c1_zero_chain(self):
        """Testa S0 e ausência de S1, S2 quando D < 0"""
        points = divisor_point_types(KolmogorovParams(1, 1, 0, 1, 0, 1))
        self.assertEqual(list(points), ["S0"])
        self.assertIs(points["S0"][1], LocalType.SADDLE)


class TestO2(unittest.TestCase):

    def test_closed_form_and_eigenvalues_agree(self):
        """Testa o tipo de O2 nos três regimes"""
        cases = [
            (KolmogorovParams(1, -1, 1, 1, 3, 2), LocalType.STABLE_NODE),
            (KolmogorovParams(1, 0, 1, -1, 1, 1), LocalType.UNSTABLE_NODE),
            (KolmogorovParams(1, 0, 1, 1, 1, Fraction(-3, 2)), LocalType.SADDLE),
        ]
        for params, expected in cases:
            self.assertIs(o2_closed_form_type(params), expected)
            self.assertIs(o2_classify(params), expected)

    def test_requires_h2(self):
        """Testa mu = -1 fora de H2"""
        with self.assertRaises(HypothesisViolation):
            o2_classify(KolmogorovParams(1, 0, 1, 1, 1, -1))


class TestHorizontalBlowup(unittest.TestCase):

    def test_family_with_c1(self):
        """Testa u = t*v na carta U1 com cancelamento de v"""
        blown, power = horizontal_blowup(family_u1_system(KolmogorovParams(1, -1, 1, 1, 3, 2)))
        self.assertEqual(power, 1)
        self.assertEqual(blown.p, parse_poly("t + t^3*v + 3*t^2*v - t*v", TV))
        self.assertEqual(blown.q, parse_poly("2*v + 2*t^2*v^2 + 6*t*v^2 - v^2", TV))

    def test_family_without_c1(self):
        """Testa o cancelamento de v^2 quando c1 = 0"""
        blown, power = horizontal_blowup(family_u1_system(KolmogorovParams(1, 1, 0, 1, 0, 1)))
        self.assertEqual(power, 2)
        self.assertEqual(blown.p, parse_poly("t + t^3", TV))
        self.assertEqual(blown.q, parse_poly("t^2*v - v", TV))

    def test_axis_separatrix_by_side(self):
        """Testa o semieixo z = 0 em O1 (lado +1) e em V1 (lado -1)"""
        expected = {
            (1, -1, 1, 1, 3, 2): (False, False),
            (1, 1, 1, 1, 3, 0): (True, False),
            (1, 1, 0, 1, 0, 1): (True, True),
            (1, 0, 1, -1, 1, 1): (False, False),
            (1, 0, 1, 1, 1, Fraction(-1, 2)): (True, True),
            (1, -1, 0, 1, 0, 1): (False, False),
        }
        for values, (o1_side, v1_side) in expected.items():
            params = KolmogorovParams(*values)
            self.assertEqual(o1_axis_separatrix(params, 1), o1_side, values)
            self.assertEqual(o1_axis_separatrix(params, -1), v1_side, values)


class TestO1Signature(unittest.TestCase):

    def setUp(self):
        self.tables = load_tables()

    def test_topological_class(self):
        """Testa as classes de sela, nós e sela-nó"""
        self.assertEqual(topological_class(LocalType.TOPOLOGICAL_SADDLE), "S")
        self.assertEqual(topological_class(LocalType.UNSTABLE_FOCUS), "UN")
        self.assertEqual(topological_class(LocalType.TOPOLOGICAL_STABLE_NODE), "StN")
        self.assertEqual(topological_class(LocalType.SADDLE_NODE, (0.0, -2.0)), "SNs")
        self.assertEqual(topological_class(LocalType.SADDLE_NODE, (0.0, 1.0)), "SNu")

    def test_signatures(self):
        """Testa a assinatura montada com a dessingularização"""
        self.assertEqual(o1_signature(KolmogorovParams(1, -1, 1, 1, 3, 2)),
                         {'Q0': "S", 'Q1': "UN", 'axis': "UN", 'equator': "+", 'side': "-"})
        self.assertEqual(o1_signature(KolmogorovParams(1, 1, 1, 1, 3, 0)),
                         {'Q0': "S", 'Q1': "S", 'axis': "SNu", 'equator': "+", 'side': "-"})
        self.assertEqual(o1_signature(KolmogorovParams(1, 1, 0, 1, 0, 1)),
                         {'S0': "S", 'axis': "S", 'equator': "+"})

    def test_labels_agree_with_rules(self):
        """Testa o rótulo pela assinatura contra as regras de O1 nas quatro cadeias"""
        cases = [
            (1, -1, 1, 1, 3, 2),
            (1, 0, 1, -1, 1, 1),
            (1, 0, 1, 1, 0, 0),
            (1, 0, 1, 1, 1, Fraction(-1, 2)),
            (1, 0, 1, 1, 1, -2),
            (1, 1, 0, 1, 0, 1),
            (2, -1, 0, 1, 0, 1),
            (1, 1, 0, 1, 2, 1),
        ]
        for values in cases:
            params = KolmogorovParams(*values)
            self.assertEqual(o1_label_from_blowup(params, self.tables), self.tables.o1_label(params), values)

    def test_unknown_signature(self):
        """Testa None quando nenhum padrão coincide"""
        self.assertIsNone(self.tables.o1_label_for_signature({'Q0': "Deg"}))


if __name__ == '__main__':
    unittest.main()
