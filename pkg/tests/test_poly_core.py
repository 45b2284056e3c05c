"""
Testes para a álgebra exata de polinômios em duas variáveis
"""

import unittest
from fractions import Fraction
from pathlib import Path
import sys

# Adicionar src ao path
sys.path.insert(0, str(Path(__file__).parent.parent / 'src'))

from exceptions import NotDivisible, ParseError, ZeroPolynomial
from poly_core import (
    FIRST, SECOND, PlanarSystem, Poly2, Surd, axis_restriction, exact_div_by_power,
    leading_homogeneous_part, parse_poly, poly_compose_substitute, poly_diff, poly_eval,
    to_rational, univariate_real_roots,
)


class TestToRational(unittest.TestCase):

    def test_text_and_decimals(self):
        """Testa conversão de texto, decimais e inteiros"""
        self.assertEqual(to_rational("3/2"), Fraction(3, 2))
        self.assertEqual(to_rational("0.25"), Fraction(1, 4))
        self.assertEqual(to_rational(-2), Fraction(-2))
        self.assertEqual(to_rational(0.1), Fraction(1, 10))

    def test_invalid_values(self):
        """Testa rejeição de texto inválido, booleanos e infinitos"""
        with self.assertRaises(ParseError):
            to_rational("abc")
        with self.assertRaises(ParseError):
            to_rational(True)
        with self.assertRaises(ParseError):
            to_rational(float('inf'))


class TestSurd(unittest.TestCase):

    def test_sign_compares_squares(self):
        """Testa sinal exato de a + b*sqrt(d)"""
        self.assertEqual(Surd(1, -1, 2).sign(), -1)
        self.assertEqual(Surd(2, -1, 2).sign(), 1)
        self.assertEqual(Surd(0, 0, 0).sign(), 0)
        self.assertEqual(Surd.sqrt(13).sign(), 1)

    def test_perfect_square_collapses(self):
        """Testa que raízes de quadrados perfeitos viram racionais"""
        root = Surd.sqrt(4)
        self.assertTrue(root.is_rational)
        self.assertEqual(root.rational(), Fraction(2))
        self.assertEqual(Surd.sqrt(Fraction(9, 4)), Fraction(3, 2))

    def test_arithmetic_stays_exact(self):
        """Testa que (sqrt(2))^2 = 2 e (1 + sqrt(2))(1 - sqrt(2)) = -1"""
        r2 = Surd.sqrt(2)
        self.assertEqual(r2 * r2, 2)
        self.assertEqual((1 + r2) * (1 - r2), -1)
        self.assertFalse(r2.is_rational)
        self.assertAlmostEqual(float(r2), 2 ** 0.5, places=14)

    def test_negative_radicand(self):
        """Testa erro para radicando negativo"""
        with self.assertRaises(ValueError):
            Surd(0, 1, -1)


class TestPoly2(unittest.TestCase):

    def setUp(self):
        self.f = parse_poly("x^2*y - 3*y + 1/2")

    def test_parse(self):
        """Testa leitura de termos com coeficientes racionais"""
        self.assertEqual(self.f.coeff(2, 1), Fraction(1))
        self.assertEqual(self.f.coeff(0, 1), Fraction(-3))
        self.assertEqual(self.f.coeff(0, 0), Fraction(1, 2))
        self.assertEqual(self.f.degree, 3)
        self.assertEqual(self.f.lowest_degree, 0)

    def test_parse_errors(self):
        """Testa variáveis desconhecidas e textos vazios"""
        with self.assertRaises(ParseError):
            parse_poly("w^2")
        with self.assertRaises(ParseError):
            parse_poly("")

    def test_zero_coefficients_are_not_stored(self):
        """Testa que x - x é o polinômio nulo"""
        x = Poly2.variable(FIRST)
        self.assertTrue((x - x).is_zero())
        self.assertEqual((x - x).degree, -1)

    def test_evaluation(self):
        """Testa avaliação exata e em ponto flutuante"""
        self.assertEqual(poly_eval(self.f, (Fraction(1), Fraction(2))), Fraction(-7, 2))
        self.assertAlmostEqual(poly_eval(self.f, (1.0, 2.0)), -3.5)

    def test_diff(self):
        """Testa derivadas parciais formais"""
        self.assertEqual(poly_diff(self.f, FIRST), parse_poly("2*x*y"))
        self.assertEqual(poly_diff(self.f, SECOND), parse_poly("x^2 - 3"))

    def test_leading_homogeneous_part(self):
        """Testa a parte homogênea de menor grau"""
        g = parse_poly("x*y + y^2 - x^3")
        m, part = leading_homogeneous_part(g)
        self.assertEqual(m, 2)
        self.assertEqual(part, parse_poly("x*y + y^2"))
        with self.assertRaises(ZeroPolynomial):
            leading_homogeneous_part(Poly2())

    def test_exact_division(self):
        """Testa divisão por potência de variável"""
        g = parse_poly("x^3*y + 2*x^2")
        self.assertEqual(exact_div_by_power(g, FIRST, 2), parse_poly("x*y + 2"))
        with self.assertRaises(NotDivisible):
            exact_div_by_power(g, FIRST, 3)

    def test_compose_substitute(self):
        """Testa a substituição da explosão direcional y -> x*y"""
        g = parse_poly("x^2 + y")
        x = Poly2.variable(FIRST)
        y = Poly2.variable(SECOND)
        self.assertEqual(poly_compose_substitute(g, x, x * y), parse_poly("x^2 + x*y"))

    def test_axis_restriction(self):
        """Testa restrição aos eixos"""
        g = parse_poly("2 + 3*x - x^2*y + y^2")
        self.assertEqual(axis_restriction(g, SECOND), [Fraction(2), Fraction(3)])
        self.assertEqual(axis_restriction(g, FIRST), [Fraction(2), Fraction(0), Fraction(1)])


class TestUnivariateRoots(unittest.TestCase):

    def test_double_root(self):
        """Testa raiz dupla racional"""
        self.assertEqual(univariate_real_roots([1, -2, 1]), [(Fraction(1), 2)])

    def test_irrational_pair(self):
        """Testa o par ±sqrt(2) como Surd ordenado"""
        roots = univariate_real_roots([-2, 0, 1])
        self.assertEqual(len(roots), 2)
        self.assertEqual([m for _, m in roots], [1, 1])
        self.assertAlmostEqual(float(roots[0][0]), -2 ** 0.5, places=14)
        self.assertAlmostEqual(float(roots[1][0]), 2 ** 0.5, places=14)
        self.assertFalse(roots[1][0].is_rational)
        self.assertEqual(roots[1][0] * roots[1][0], 2)

    def test_cubic_with_rational_roots(self):
        """Testa deflação por raízes racionais"""
        # (t - 1)(t + 2)(2t - 1) = 2t^3 + t^2 - 5t + 2
        roots = univariate_real_roots([2, -5, 1, 2])
        self.assertEqual([r for r, _ in roots], [Fraction(-2), Fraction(1, 2), Fraction(1)])

    def test_zero_root_and_no_real_roots(self):
        """Testa raiz nula extraída e quadrática sem raízes reais"""
        self.assertEqual(univariate_real_roots([0, 1]), [(Fraction(0), 1)])
        self.assertEqual(univariate_real_roots([1, 0, 1]), [])
        with self.assertRaises(ZeroPolynomial):
            univariate_real_roots([0, 0])


class TestPlanarSystem(unittest.TestCase):

    def test_jacobian_exact(self):
        """Testa jacobiana exata de x' = x - y^2, y' = x*y"""
        system = PlanarSystem(parse_poly("x - y^2"), parse_poly("x*y"))
        J = system.jacobian((Fraction(1), Fraction(2)))
        self.assertEqual(J, [[1, -4], [2, 1]])
        self.assertEqual(system.degree, 2)

    def test_zero_system(self):
        """Testa rejeição do sistema identicamente nulo"""
        with self.assertRaises(ZeroPolynomial):
            PlanarSystem(Poly2(), Poly2())


if __name__ == '__main__':
    unittest.main()
