"""
Testes para a linha de comando
"""

import io
import json
import unittest
from pathlib import Path
from unittest import mock
import sys

import pandas as pd
from click.testing import CliRunner

# Adicionar src ao path
sys.path.insert(0, str(Path(__file__).parent.parent / 'src'))

from config import AnalysisConfig
from family import KolmogorovParams, SymmetryOp
from main import CONTACT_SAMPLES, EXIT_HYPOTHESIS, PortraitAnalyzer, cli

G19 = ['--a0=1', '--c0=-1', '--c1=1', '--c2=1', '--c3=3', '--mu=2']


class TestClassifyCommand(unittest.TestCase):

    def setUp(self):
        self.runner = CliRunner(mix_stderr=False)

    def invoke(self, args):
        with self.runner.isolated_filesystem():
            return self.runner.invoke(cli, args)

    def test_json_output(self):
        """Testa o JSON do comando classify"""
        result = self.invoke(['classify'] + G19)
        self.assertEqual(result.exit_code, 0, result.stderr)
        data = json.loads(result.stdout)
        self.assertEqual(data['g_label'], "G19")
        self.assertEqual(data['subcase'], "1.9")
        self.assertEqual(data['caption'], {'r': 7, 's': 22})

    def test_pretty(self):
        """Testa o resumo legível"""
        result = self.invoke(['classify', '--pretty'] + G19)
        self.assertEqual(result.exit_code, 0, result.stderr)
        self.assertIn("RELATÓRIO DO RETRATO DE FASE", result.stdout)
        self.assertIn("G19", result.stdout)

    def test_degenerate_family(self):
        """Testa mu = -1"""
        result = self.invoke(['classify', '--a0=1', '--c0=0', '--c1=1', '--c2=1', '--c3=1', '--mu=-1'])
        self.assertEqual(result.exit_code, EXIT_HYPOTHESIS)
        data = json.loads(result.stdout)
        self.assertEqual(data['error'], 'DegenerateFamily')
        self.assertEqual(data['violations'], ['mu_equals_minus_one'])

    def test_hypothesis_violation(self):
        """Testa a0 = 0 com c0 < 0"""
        result = self.invoke(['classify', '--a0=0', '--c0=-1', '--c1=1', '--c2=1', '--c3=3', '--mu=2'])
        self.assertEqual(result.exit_code, EXIT_HYPOTHESIS)
        data = json.loads(result.stdout)
        self.assertEqual(data['error'], 'HypothesisViolation')
        self.assertIn('a0_zero_requires_c0_positive', data['violations'])

    def test_bad_parameters(self):
        """Testa parâmetro ausente e valor não racional"""
        missing = self.invoke(['classify', '--a0=1'])
        self.assertEqual(missing.exit_code, 2)
        invalid = self.invoke(['classify'] + G19[:-1] + ['--mu=abc'])
        self.assertEqual(invalid.exit_code, 2)


class TestSweepCommand(unittest.TestCase):

    def test_csv(self):
        """Testa a varredura com um ponto válido e um degenerado"""
        runner = CliRunner(mix_stderr=False)
        with runner.isolated_filesystem():
            result = runner.invoke(cli, ['sweep', '--a0=1', '--c0=-1', '--c1=1', '--c2=1', '--c3=3',
                                         '--mu=2,-1'])
        self.assertEqual(result.exit_code, 0, result.stderr)
        df = pd.read_csv(io.StringIO(result.stdout))
        self.assertEqual(len(df), 2)
        self.assertEqual(df.loc[0, 'g_label'], "G19")
        self.assertTrue(df.loc[1, 'error'].startswith("DegenerateFamily"))


class TestVerificationSuites(unittest.TestCase):

    def setUp(self):
        self.analyzer = PortraitAnalyzer(AnalysisConfig(threads=1))
        self.params = KolmogorovParams(1, -1, 1, 1, 3, 2)

    def test_symmetry_passes(self):
        """Testa que as três simetrias levam órbitas em órbitas até t = 5"""
        self.assertIsNone(self.analyzer._check_symmetry(self.params))

    def test_symmetry_detects_broken_map(self):
        """Testa a falha quando a transformação dos parâmetros é ignorada"""
        with mock.patch.object(SymmetryOp, 'apply', lambda self, params: params):
            problem = self.analyzer._check_symmetry(self.params)
        self.assertIsNotNone(problem)
        self.assertTrue(problem.startswith("FlipX"), problem)

    def test_contact_samples(self):
        """Testa que a reta z = z0 é cortada uma vez em cada nível sorteado"""
        with mock.patch('main.contact_sign_changes', return_value=1) as changes:
            self.assertIsNone(self.analyzer._check_contact(self.params))
        self.assertEqual(changes.call_count, CONTACT_SAMPLES)
        levels = [call.args[1] for call in changes.call_args_list]
        self.assertEqual(len(set(levels)), CONTACT_SAMPLES)
        self.assertTrue(all(0.1 <= abs(z0) <= 3.0 for z0 in levels))
        self.assertIsNone(self.analyzer._check_contact(self.params))

    def test_contact_detects_extra_crossing(self):
        """Testa a falha com duas trocas de sinal"""
        with mock.patch('main.contact_sign_changes', return_value=2):
            problem = self.analyzer._check_contact(self.params)
        self.assertIn("2 trocas de sinal", problem)

    def test_contact_skips_c1_zero(self):
        """Testa que c1 = 0 fica fora da bateria"""
        self.assertEqual(self.analyzer._check_contact(KolmogorovParams(1, 1, 0, 1, 0, 1)), "skip")


class TestReproduceTables(unittest.TestCase):

    def setUp(self):
        self.analyzer = PortraitAnalyzer(AnalysisConfig(threads=1))

    def test_generic_labels(self):
        """Testa os rótulos do pipeline genérico para G19"""
        labels = self.analyzer.generic_labels(KolmogorovParams(1, -1, 1, 1, 3, 2))
        self.assertEqual(labels['o1'], "L9")
        self.assertEqual(labels['o2'], "StN")
        self.assertEqual(labels['g'], ["G19"])

    def test_row_passes(self):
        """Testa a linha 1.9 reproduzida pelo pipeline genérico"""
        df = self.analyzer.reproduce_tables(only="1.9")
        self.assertEqual(len(df), 1)
        self.assertEqual(df.loc[0, 'computed'], "L9/StN/G19")
        self.assertEqual(df.loc[0, 'expected'], "L9/StN/G19")
        self.assertEqual(df.loc[0, 'status'], "PASS")

    def test_generic_o1_disagreement_fails(self):
        """Testa que um O1 genérico diferente do impresso reprova a linha"""
        with mock.patch('main.o1_label_from_blowup', return_value="L3"):
            df = self.analyzer.reproduce_tables(only="1.9")
        self.assertTrue(df.loc[0, 'computed'].startswith("L3/"))
        self.assertEqual(df.loc[0, 'status'], "FAIL")


if __name__ == '__main__':
    unittest.main()
