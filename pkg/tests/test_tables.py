"""
Testes para as condições exatas e para as tabelas de classificação
"""

import unittest
from fractions import Fraction
from pathlib import Path
import sys

# Adicionar src ao path
sys.path.insert(0, str(Path(__file__).parent.parent / 'src'))

from conditions import Condition, ParamEnvironment, all_hold, compile_conditions
from exceptions import NoMatchingCase, ParseError
from family import KolmogorovParams
from index import sector_decomposition_for_label, sector_index
from tables import load_tables


class TestConditions(unittest.TestCase):

    def setUp(self):
        self.env = ParamEnvironment(KolmogorovParams(1, -1, 1, 1, 3, 2))

    def test_chained_comparison(self):
        """Testa comparações encadeadas como -1 < mu < 0"""
        self.assertFalse(Condition.parse("-1 < mu < 0").holds(self.env))
        self.assertTrue(Condition.parse("0 < mu < 3").holds(self.env))

    def test_derived_names(self):
        """Testa A, D e Rc em aritmética exata"""
        self.assertTrue(Condition.parse("A < 0").holds(self.env))
        self.assertTrue(Condition.parse("D == 13").holds(self.env))
        # sqrt(13) > 3
        self.assertTrue(Condition.parse("Rc - c3 > 0").holds(self.env))
        self.assertTrue(Condition.parse("c2*A < 0").holds(self.env))

    def test_rational_constants(self):
        """Testa constantes decimais lidas como racionais exatos"""
        env = ParamEnvironment(KolmogorovParams(1, 0, 1, 1, 1, Fraction(-1, 2)))
        self.assertTrue(Condition.parse("mu == -0.5").holds(env))
        self.assertTrue(Condition.parse("mu == -1/2").holds(env))

    def test_undefined_radical(self):
        """Testa Rc com D < 0"""
        env = ParamEnvironment(KolmogorovParams(1, 1, 0, 1, 0, 1))
        with self.assertRaises(ParseError):
            Condition.parse("Rc > 0").holds(env)

    def test_invalid_texts(self):
        """Testa textos que não são comparações ou usam nomes desconhecidos"""
        with self.assertRaises(ParseError):
            Condition.parse("mu +")
        with self.assertRaises(ParseError):
            Condition.parse("mu + 1")
        with self.assertRaises(ParseError):
            Condition.parse("foo > 0").holds(self.env)

    def test_all_hold(self):
        """Testa conjunção, inclusive a lista vazia"""
        params = KolmogorovParams(1, -1, 1, 1, 3, 2)
        self.assertTrue(all_hold([], params))
        self.assertTrue(all_hold(compile_conditions(["mu > 0", "c2 > 0"]), params))
        self.assertFalse(all_hold(compile_conditions(["mu > 0", "c2 < 0"]), params))


class TestClassificationTables(unittest.TestCase):

    def setUp(self):
        self.tables = load_tables()

    def test_cases(self):
        """Testa os seis casos dos pontos finitos"""
        self.assertEqual(self.tables.finite_case(KolmogorovParams(1, -1, 1, 1, 3, 2)), 1)
        self.assertEqual(self.tables.finite_case(KolmogorovParams(1, 0, 0, 1, 1, 1)), 2)
        self.assertEqual(self.tables.finite_case(KolmogorovParams(1, 0, 1, 1, 0, 0)), 4)
        self.assertEqual(self.tables.finite_case(KolmogorovParams(1, 1, 0, 1, 0, 1)), 6)

    def test_global_rows_of_designated_witnesses(self):
        """Testa linha, sublinha e rótulo G das testemunhas designadas"""
        expected = {
            'G1': ("1.1", None, "L12"),
            'G19': ("1.9", None, "L9"),
            'G94': ("4.4", "mu == 0, c1 != 0", "L5"),
            'G95': ("6.2", "c1 == 0, mu > -1", "L19"),
        }
        for g_label, (row_id, branch, o1) in expected.items():
            params = KolmogorovParams.from_mapping(self.tables.raw.designated_witnesses[g_label])
            row = self.tables.finite_row(params)
            self.assertEqual(row.row_id, row_id)
            global_row = self.tables.global_row(params, row.row_id)
            self.assertEqual(global_row.g_label, g_label)
            self.assertEqual(global_row.branch, branch)
            self.assertEqual(global_row.o1, o1)
            self.assertEqual(self.tables.o1_label(params), o1)

    def test_row_key(self):
        """Testa a chave de sublinha com condição"""
        params = KolmogorovParams(1, 0, 1, 1, 0, 0)
        row = self.tables.global_row(params, "4.4")
        self.assertEqual(row.key, "4.4 [mu == 0, c1 != 0]")

    def test_captions(self):
        """Testa legendas [R, S]"""
        self.assertEqual(self.tables.caption("G1"), (8, 21))
        self.assertEqual(self.tables.caption("G19"), (7, 22))
        self.assertEqual(self.tables.caption("G94"), (3, 12))
        self.assertIsNone(self.tables.caption("G999"))

    def test_every_row_has_caption_and_index(self):
        """Testa que cada sublinha global tem legenda e índice de O1"""
        for row in self.tables.all_global_rows():
            self.assertIsNotNone(self.tables.caption(row.g_label), row.key)
            self.tables.l_index(row.o1)

    def test_unknown_label(self):
        """Testa rótulo L inexistente"""
        with self.assertRaises(NoMatchingCase):
            self.tables.l_index("L99")


class TestSectorRule(unittest.TestCase):

    def setUp(self):
        self.tables = load_tables()

    def test_decomposition_reproduces_index(self):
        """Testa i = 1 + (e - h)/2 para todos os rótulos L"""
        for label, index in self.tables.raw.l_index.items():
            decomposition = sector_decomposition_for_label(label, self.tables)
            self.assertEqual(sector_index(decomposition), index, label)

    def test_known_labels(self):
        """Testa decomposições de rótulos elípticos e hiperbólicos"""
        self.assertEqual(sector_decomposition_for_label("L12", self.tables).to_dict(),
                         {'e': 2, 'h': 0, 'p': 2})
        self.assertEqual(sector_decomposition_for_label("L22", self.tables).to_dict(),
                         {'e': 4, 'h': 0, 'p': 2})
        self.assertEqual(sector_decomposition_for_label("L5", self.tables).to_dict(),
                         {'e': 0, 'h': 4, 'p': 0})
        self.assertTrue(self.tables.is_elliptic("L9"))
        self.assertFalse(self.tables.is_elliptic("L5"))


if __name__ == '__main__':
    unittest.main()
