"""
Testes para o classificador de retratos globais
"""

import unittest
from unittest import mock
from dataclasses import replace
from fractions import Fraction
from pathlib import Path
import sys

# Adicionar src ao path
sys.path.insert(0, str(Path(__file__).parent.parent / 'src'))

from classifier import CaseLabel, PhasePortraitClassifier, SCHEMA_VERSION
from exceptions import CrossCheckMismatch, DegenerateFamily, HypothesisViolation
from family import KolmogorovParams, SymmetryOp
from singular import LocalType
from tables import ClassificationTables


class TestClassify(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.classifier = PhasePortraitClassifier()

    def test_designated_witnesses(self):
        """Testa subcaso, O1, O2 e rótulo G das testemunhas designadas"""
        expected = {
            (1, 0, 1, -1, 1, 1): ("1.1", "L12", LocalType.UNSTABLE_NODE, "G1", (8, 21)),
            (1, -1, 1, 1, 3, 2): ("1.9", "L9", LocalType.STABLE_NODE, "G19", (7, 22)),
            (1, 0, 1, 1, 0, 0): ("4.4", "L5", LocalType.STABLE_NODE, "G94", (3, 12)),
        }
        for values, (subcase, o1, o2, g_label, caption) in expected.items():
            report = self.classifier.classify(KolmogorovParams(*values))
            self.assertEqual(report.case.subcase, subcase)
            self.assertEqual(report.o1_label, o1)
            self.assertIs(report.o2_type, o2)
            self.assertEqual(report.g_label, g_label)
            self.assertEqual(report.caption, caption)

    def test_invariant_line_branch(self):
        """Testa a sublinha com c1 = 0 do caso 6"""
        report = self.classifier.classify(KolmogorovParams(1, 1, 0, 1, 0, 1))
        self.assertEqual(report.case.major, 6)
        self.assertEqual(report.case.subcase, "6.2")
        self.assertEqual(report.case.mu_branch, "c1 == 0, mu > -1")
        self.assertEqual(report.o1_label, "L19")
        self.assertEqual(report.g_label, "G95")

    def test_errata_row(self):
        """Testa rótulo G repetido e tipo de O2 impresso na linha 1.4"""
        report = self.classifier.classify(KolmogorovParams(1, 0, 1, 1, 1, Fraction(-1, 2)))
        self.assertEqual(report.case.subcase, "1.4")
        self.assertEqual(report.case.mu_branch, "-1 < mu < 0")
        self.assertEqual(report.g_label, "G7")
        self.assertEqual(report.o1_label, "L4")
        self.assertIs(report.o2_type, LocalType.STABLE_NODE)
        self.assertEqual(report.o2_printed, "S")
        self.assertIn("duplicate-G7-row-1.4", report.errata)
        self.assertIn("o2-row-1.4", report.errata)

    def test_h2_interpretation_flag(self):
        """Testa a marca de leitura de H2 quando mu = 0"""
        report = self.classifier.classify(KolmogorovParams(1, 0, 1, 1, 0, 0))
        self.assertIn("h2_read_as_h1_form", report.errata)

    def test_normalization(self):
        """Testa c1 < 0 levado a c1 > 0 por FlipX"""
        report = self.classifier.classify(KolmogorovParams(1, -1, -1, 1, 3, 2))
        self.assertEqual(report.symmetry_ops, [SymmetryOp.FLIP_X])
        self.assertEqual(report.normalized, KolmogorovParams(1, -1, 1, 1, 3, 2))
        self.assertEqual(report.g_label, "G19")

    def test_out_of_scope(self):
        """Testa mu = -1 e a0 = 0 com c0 <= 0"""
        with self.assertRaises(DegenerateFamily):
            self.classifier.classify(KolmogorovParams(1, 0, 1, 1, 1, -1))
        with self.assertRaises(HypothesisViolation) as ctx:
            self.classifier.classify(KolmogorovParams(0, -1, 1, 1, 3, 2))
        self.assertIn("a0_zero_requires_c0_positive", ctx.exception.report.violations)

    def test_row_key(self):
        """Testa a chave da sublinha e o None fora das hipóteses"""
        self.assertEqual(self.classifier.row_key(KolmogorovParams(1, 0, 1, 1, 0, 0)), "4.4 [mu == 0, c1 != 0]")
        self.assertIsNone(self.classifier.row_key(KolmogorovParams(1, 0, 1, 1, 1, -1)))

    def test_case_label(self):
        """Testa subcaso incompatível com o caso"""
        self.assertEqual(str(CaseLabel(1, "1.4", "-1 < mu < 0")), "1.4 [-1 < mu < 0]")
        with self.assertRaises(ValueError):
            CaseLabel(2, "1.4")


class TestReport(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.classifier = PhasePortraitClassifier()
        cls.report = cls.classifier.full_report(KolmogorovParams(1, -1, 1, 1, 3, 2))

    def test_cross_checks(self):
        """Testa as conferências com o pipeline genérico sem traçado"""
        self.assertEqual(self.report.cross_checks,
                         ["o1_label", "finite_types", "o2_type", "divisor", "winding_indices"])
        self.assertTrue(self.report.index_ledger.balanced)
        self.assertIsNone(self.report.s_count)
        self.assertIsNone(self.report.caption_matches)

    def test_to_dict(self):
        """Testa as chaves do JSON"""
        data = self.report.to_dict()
        self.assertEqual(data['schema_version'], SCHEMA_VERSION)
        self.assertEqual(data['subcase'], "1.9")
        self.assertEqual(data['g_label'], "G19")
        self.assertEqual(data['caption'], {'r': 7, 's': 22})
        self.assertEqual(data['params']['c0'], "-1")
        self.assertEqual(data['o2_type'], LocalType.STABLE_NODE.value)
        self.assertNotIn('separatrices', data)

    def test_summary(self):
        """Testa o resumo legível"""
        classifier = PhasePortraitClassifier()
        classifier.full_report(KolmogorovParams(1, -1, 1, 1, 3, 2))
        summary = classifier.generate_summary_report()
        self.assertIn("Retrato global: G19", summary)
        self.assertIn("O1: L9", summary)
        self.assertIn("equilibrado", summary)

    def test_summary_without_classification(self):
        """Testa o resumo antes de qualquer classificação"""
        self.assertEqual(PhasePortraitClassifier().generate_summary_report(),
                         "Nenhuma classificação realizada ainda.")

    def test_distinctness(self):
        """Testa colisões de assinatura entre rótulos G"""
        reports = [self.classifier.classify(KolmogorovParams(*values))
                   for values in ((1, 0, 1, -1, 1, 1), (1, -1, 1, 1, 3, 2))]
        self.assertEqual(self.classifier.distinctness_collisions(reports), [])
        twin = replace(reports[1], g_label="G20")
        collisions = self.classifier.distinctness_collisions(reports + [twin])
        self.assertEqual(len(collisions), 1)
        self.assertEqual(collisions[0]["labels"], ["G19", "G20"])


class TestO1CrossCheck(unittest.TestCase):

    def test_label_comes_from_blowup(self):
        """Testa que a conferência de O1 não consulta as regras de O1"""
        classifier = PhasePortraitClassifier()
        with mock.patch.object(ClassificationTables, 'o1_label', side_effect=AssertionError):
            report = classifier.full_report(KolmogorovParams(1, 1, 0, 1, 0, 1))
        self.assertIn("o1_label", report.cross_checks)

    def test_wrong_signature_label_raises(self):
        """Testa a divergência quando a assinatura aponta outro rótulo"""
        classifier = PhasePortraitClassifier()
        with mock.patch.object(ClassificationTables, 'o1_label_for_signature', return_value="L3"):
            with self.assertRaises(CrossCheckMismatch) as ctx:
                classifier.full_report(KolmogorovParams(1, -1, 1, 1, 3, 2))
        self.assertEqual(ctx.exception.closed_form, "L9")
        self.assertEqual(ctx.exception.generic, "L3")


if __name__ == '__main__':
    unittest.main()
