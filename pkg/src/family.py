"""
Família de Kolmogorov de seis parâmetros: construção, hipóteses, simetrias e invariantes
"""

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from loguru import logger

from exceptions import DegenerateFamily, InvariantDegenerate, MalformedReduction
from poly_core import (
    PlanarSystem, Poly2, Surd, to_rational, univariate_real_roots,
)


PARAM_NAMES = ('a0', 'c0', 'c1', 'c2', 'c3', 'mu')


@dataclass(frozen=True)
class KolmogorovParams:
    """Os seis parâmetros (a0, c0, c1, c2, c3, mu), todos racionais exatos"""
    a0: Fraction
    c0: Fraction
    c1: Fraction
    c2: Fraction
    c3: Fraction
    mu: Fraction

    def __post_init__(self):
        for name in PARAM_NAMES:
            object.__setattr__(self, name, to_rational(getattr(self, name)))

    @classmethod
    def from_mapping(cls, data: Dict[str, object]) -> 'KolmogorovParams':
        """Aceita {"a0": "3/2", ...} como vem do JSON ou da CLI"""
        missing = [name for name in PARAM_NAMES if name not in data]
        if missing:
            raise ValueError(f"Parâmetros ausentes: {', '.join(missing)}")
        return cls(**{name: to_rational(data[name]) for name in PARAM_NAMES})

    @property
    def A(self) -> Fraction:
        """a0 + c0*mu"""
        return self.a0 + self.c0 * self.mu

    @property
    def D(self) -> Fraction:
        """c3^2 - 4*c0*c2"""
        return self.c3 * self.c3 - 4 * self.c0 * self.c2

    @property
    def c1mu(self) -> Fraction:
        return self.c1 * self.mu

    @property
    def rc(self) -> Surd:
        """R_c = sqrt(c3^2 - 4 c0 c2)"""
        if self.D < 0:
            raise ValueError(f"R_c indefinido: c3^2 - 4c0c2 = {self.D} < 0")
        return Surd.sqrt(self.D)

    @property
    def beta_squared(self) -> Fraction:
        return self.c3 * self.c3 + 4 * self.c2 * (self.a0 - 2 * self.c0)

    def values(self) -> Tuple[Fraction, ...]:
        return tuple(getattr(self, name) for name in PARAM_NAMES)

    def as_dict(self) -> Dict[str, str]:
        return {name: str(getattr(self, name)) for name in PARAM_NAMES}

    def label(self) -> str:
        return "(" + ",".join(str(v) for v in self.values()) + ")"


@dataclass
class HypothesisReport:
    """Resultado da verificação das hipóteses H, H1 e H2"""
    satisfies_H: bool
    satisfies_H1: bool
    satisfies_H2: bool
    violations: List[str] = field(default_factory=list)
    interpretation_flags: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict[str, object]:
        return {
            'satisfies_H': self.satisfies_H,
            'satisfies_H1': self.satisfies_H1,
            'satisfies_H2': self.satisfies_H2,
            'violations': list(self.violations),
            'interpretation_flags': list(self.interpretation_flags),
        }


class SymmetryOp(Enum):
    """Espelhamentos e reversão temporal que preservam a família"""
    FLIP_X = "FlipX"
    FLIP_Z = "FlipZ"
    TIME_REVERSE = "TimeReverse"

    def apply(self, params: KolmogorovParams) -> KolmogorovParams:
        if self is SymmetryOp.FLIP_X:
            return replace(params, c1=-params.c1)
        if self is SymmetryOp.FLIP_Z:
            return replace(params, c3=-params.c3)
        # zeros continuam zeros, o que cobre os casos a0 = 0 e c0 = 0
        return replace(params, a0=-params.a0, c0=-params.c0, c2=-params.c2)

    def map_point(self, x: float, z: float) -> Tuple[float, float]:
        """Imagem de um ponto do retrato original no retrato transformado"""
        if self is SymmetryOp.FLIP_X:
            return -x, z
        if self is SymmetryOp.FLIP_Z:
            return x, -z
        return -x, -z

    @property
    def reverses_time(self) -> bool:
        return self is SymmetryOp.TIME_REVERSE


@dataclass
class DarbouxCertificate:
    """Expoentes, taxa e resíduo da relação de cofatores"""
    lambda1: Fraction
    lambda2: Fraction
    s: Fraction
    residual: Poly2

    @property
    def is_valid(self) -> bool:
        return self.residual.is_zero()

    def to_dict(self) -> Dict[str, object]:
        return {
            'lambda1': str(self.lambda1),
            'lambda2': str(self.lambda2),
            's': str(self.s),
            'residual': self.residual.format(('x', 'z')),
            'valid': self.is_valid,
        }


def build_system(params: KolmogorovParams) -> PlanarSystem:
    """
    Monta x' = x(a0 - mu(c1 x + c2 z^2 + c3 z)), z' = z(c0 + c1 x + c2 z^2 + c3 z)

    Args:
        params: parâmetros (as hipóteses são verificadas à parte)

    Returns:
        Sistema planar de grau 3 nas variáveis (x, z)
    """
    mu = params.mu
    p = Poly2({
        (1, 0): params.a0,
        (2, 0): -mu * params.c1,
        (1, 2): -mu * params.c2,
        (1, 1): -mu * params.c3,
    })
    q = Poly2({
        (0, 1): params.c0,
        (1, 1): params.c1,
        (0, 3): params.c2,
        (0, 2): params.c3,
    })
    return PlanarSystem(p, q, ('x', 'z'))


def check_hypotheses(params: KolmogorovParams) -> HypothesisReport:
    """Avalia exatamente cada condição de H, H1 e H2 e nomeia as falhas"""
    h_violations: List[str] = []
    if params.c2 == 0:
        h_violations.append("c2_zero")
    if params.a0 < 0:
        h_violations.append("a0_negative")
    if params.c1 < 0:
        h_violations.append("c1_negative")
    if params.c3 < 0:
        h_violations.append("c3_negative")
    if params.A == 0:
        h_violations.append("a0_plus_c0mu_zero")

    h1_violations: List[str] = []
    if params.a0 == 0 and params.c1mu == 0:
        h1_violations.append("a0_and_c1mu_both_zero")

    h2_violations: List[str] = []
    if params.mu == -1:
        h2_violations.append("mu_equals_minus_one")
    if params.a0 == 0 and params.c0 <= 0:
        h2_violations.append("a0_zero_requires_c0_positive")

    satisfies_h = not h_violations
    satisfies_h1 = satisfies_h and not h1_violations
    satisfies_h2 = satisfies_h1 and not h2_violations

    flags = []
    if satisfies_h2 and params.a0 * params.c1 * params.mu == 0:
        # o texto de H2 pede a0*c1*mu != 0; as tabelas usam a forma de H1
        flags.append("h2_read_as_h1_form")

    return HypothesisReport(
        satisfies_H=satisfies_h,
        satisfies_H1=satisfies_h1,
        satisfies_H2=satisfies_h2,
        violations=h_violations + h1_violations + h2_violations,
        interpretation_flags=flags,
    )


def normalize(params: KolmogorovParams) -> Tuple[KolmogorovParams, List[SymmetryOp]]:
    """
    Leva parâmetros de sinais arbitrários a a0 >= 0, c1 >= 0, c3 >= 0

    Args:
        params: parâmetros com c2 != 0

    Returns:
        (parâmetros normalizados, operações aplicadas em ordem canônica)
    """
    if params.c2 == 0:
        raise DegenerateFamily("c2 = 0 (Lotka-Volterra planar)")

    ops: List[SymmetryOp] = []
    current = params
    if current.c1 < 0:
        ops.append(SymmetryOp.FLIP_X)
    if current.c3 < 0:
        ops.append(SymmetryOp.FLIP_Z)
    if current.a0 < 0:
        ops.append(SymmetryOp.TIME_REVERSE)
    for op in ops:
        current = op.apply(current)

    if ops:
        logger.debug(f"Normalização aplicou {[op.value for op in ops]} em {params.label()}")
    return current, ops


def cofactors(params: KolmogorovParams) -> Tuple[Poly2, Poly2]:
    """Cofatores K_x e K_z das retas invariantes x = 0 e z = 0"""
    k_x = Poly2({
        (0, 0): params.a0,
        (1, 0): -params.mu * params.c1,
        (0, 2): -params.mu * params.c2,
        (0, 1): -params.mu * params.c3,
    })
    k_z = Poly2({
        (0, 0): params.c0,
        (1, 0): params.c1,
        (0, 2): params.c2,
        (0, 1): params.c3,
    })
    return k_x, k_z


def darboux_certificate(params: KolmogorovParams,
                        cofactor_pair: Optional[Tuple[Poly2, Poly2]] = None) -> DarbouxCertificate:
    """
    Certifica x^1 z^mu e^{s t} como invariante de Darboux

    Args:
        params: parâmetros da família
        cofactor_pair: cofatores alternativos (para testes de perturbação)

    Returns:
        DarbouxCertificate com resíduo K_x + mu K_z + s
    """
    if params.A == 0:
        raise InvariantDegenerate("a0 + c0*mu = 0 anula a taxa do invariante")

    k_x, k_z = cofactor_pair if cofactor_pair is not None else cofactors(params)
    lambda1, lambda2 = Fraction(1), params.mu
    s = -params.A
    residual = k_x * lambda1 + k_z * lambda2 + s
    return DarbouxCertificate(lambda1=lambda1, lambda2=lambda2, s=s, residual=residual)


def invariant_derivative(params: KolmogorovParams, x: float, z: float, t: float) -> float:
    """
    d/dt [x |z|^mu e^{-t(a0 + c0 mu)}] pela regra da cadeia ao longo do campo

    Args:
        params: parâmetros
        x, z: ponto com x != 0 e z != 0
        t: instante

    Returns:
        Valor numérico da derivada (zero a menos de arredondamento)
    """
    system = build_system(params)
    mu = float(params.mu)
    rate = float(params.A)
    x_dot, z_dot = system.evaluate(x, z)
    value = x * abs(z) ** mu * math.exp(-t * rate)
    return value * (x_dot / x + mu * z_dot / z - rate)


def contact_point(params: KolmogorovParams, z0: Fraction) -> Fraction:
    """Abscissa do único ponto de contato do campo com a reta z = z0 (c1 != 0)"""
    if params.c1 == 0:
        raise ValueError("Ponto de contato definido apenas para c1 != 0")
    z0 = to_rational(z0)
    return -(params.c2 * z0 * z0 + params.c3 * z0 + params.c0) / params.c1


def contact_sign_changes(params: KolmogorovParams, z0: float,
                         half_width: float = 10.0, samples: int = 2001) -> int:
    """Conta trocas de sinal de z' ao longo de z = z0 numa janela em torno do contato"""
    system = build_system(params)
    center = float(contact_point(params, to_rational(z0))) if params.c1 != 0 else 0.0
    changes = 0
    previous = None
    for k in range(samples):
        x = center - half_width + 2 * half_width * k / (samples - 1)
        value = system.q.evaluate(x, z0)
        current = (value > 0) - (value < 0)
        if current == 0:
            continue
        if previous is not None and current != previous:
            changes += 1
        previous = current
    return changes


def invariant_lines(params: KolmogorovParams) -> List[object]:
    """Ordenadas z_i != 0 das retas horizontais invariantes quando c1 = 0"""
    if params.c1 != 0:
        return []
    roots = univariate_real_roots([params.c0, params.c3, params.c2])
    return [root for root, _ in roots if root != 0]


# ---------------------------------------------------------------------------
# Redução do Lotka-Volterra tridimensional
# ---------------------------------------------------------------------------

Poly3 = Dict[Tuple[int, int, int], Fraction]


def _p3_add(f: Poly3, g: Poly3, scale: Fraction = Fraction(1)) -> Poly3:
    out = dict(f)
    for key, coef in g.items():
        out[key] = out.get(key, Fraction(0)) + scale * coef
    return {k: v for k, v in out.items() if v != 0}


def _p3_mul(f: Poly3, g: Poly3) -> Poly3:
    out: Poly3 = {}
    for (i1, j1, k1), c1 in f.items():
        for (i2, j2, k2), c2 in g.items():
            key = (i1 + i2, j1 + j2, k1 + k2)
            out[key] = out.get(key, Fraction(0)) + c1 * c2
    return {k: v for k, v in out.items() if v != 0}


def _p3_linear(coeffs: Tuple[Fraction, ...]) -> Poly3:
    # coeficientes na ordem (1, x, y, z)
    keys = [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)]
    return {key: c for key, c in zip(keys, coeffs) if c != 0}


@dataclass(frozen=True)
class LotkaVolterra3D:
    """x' = x(a.v), y' = y(b.v), z' = z(c.v) com v = (1, x, y, z)"""
    a: Tuple[Fraction, Fraction, Fraction, Fraction]
    b: Tuple[Fraction, Fraction, Fraction, Fraction]
    c: Tuple[Fraction, Fraction, Fraction, Fraction]

    def __post_init__(self):
        for name in ('a', 'b', 'c'):
            values = tuple(to_rational(v) for v in getattr(self, name))
            if len(values) != 4:
                raise ValueError(f"Vetor {name} precisa de 4 coeficientes")
            object.__setattr__(self, name, values)


def verify_lv3_reduction(lv: LotkaVolterra3D) -> bool:
    """
    Verifica que H = z^2/y é integral primeira no padrão b = lambda*c

    Args:
        lv: coeficientes do Lotka-Volterra 3D

    Returns:
        True se 2 z z' y - z^2 y' for identicamente nulo
    """
    nonzero = [k for k in range(4) if lv.c[k] != 0]
    if not nonzero:
        if any(v != 0 for v in lv.b):
            raise MalformedReduction("c = 0 exige b = 0 no regime z' = 0")
        logger.debug("Regime S1: z constante, identidade trivial")
        ratio = Fraction(0)
    else:
        ratio = lv.b[nonzero[0]] / lv.c[nonzero[0]]
        if any(lv.b[k] != ratio * lv.c[k] for k in range(4)):
            raise MalformedReduction(f"b não é múltiplo de c: b={lv.b}, c={lv.c}")

    y = {(0, 1, 0): Fraction(1)}
    z = {(0, 0, 1): Fraction(1)}
    y_dot = _p3_mul(y, _p3_linear(lv.b))
    z_dot = _p3_mul(z, _p3_linear(lv.c))

    left = _p3_mul(_p3_mul(z, z_dot), y)
    right = _p3_mul(_p3_mul(z, z), y_dot)
    identity = _p3_add(_p3_add({}, left, Fraction(2)), right, Fraction(-1))
    logger.debug(f"Identidade da redução com lambda={ratio}: {len(identity)} termos residuais")
    return not identity


def reduce_on_level(lv: LotkaVolterra3D, h: Fraction) -> Tuple[Tuple[Fraction, ...], Tuple[Fraction, ...]]:
    """
    Restringe o sistema 3D ao nível y = h z^2

    Returns:
        Coeficientes (a0, a1, a2, a3) e (c0, c1, c2, c3) do sistema de oito
        parâmetros x' = x(a0 + a1 x + a2 z^2 + a3 z), z' = z(c0 + c1 x + c2 z^2 + c3 z)
    """
    h = to_rational(h)
    a = (lv.a[0], lv.a[1], lv.a[2] * h, lv.a[3])
    c = (lv.c[0], lv.c[1], lv.c[2] * h, lv.c[3])
    return a, c


def eight_parameter_system(a: Tuple[Fraction, ...], c: Tuple[Fraction, ...]) -> PlanarSystem:
    """Sistema de Kolmogorov de oito parâmetros nas variáveis (x, z)"""
    p = Poly2({(1, 0): a[0], (2, 0): a[1], (1, 2): a[2], (1, 1): a[3]})
    q = Poly2({(0, 1): c[0], (1, 1): c[1], (0, 3): c[2], (0, 2): c[3]})
    return PlanarSystem(p, q, ('x', 'z'))


def match_family(a: Tuple[Fraction, ...], c: Tuple[Fraction, ...]) -> KolmogorovParams:
    """Reconhece a_i = -mu c_i (i = 1, 2, 3) e devolve os seis parâmetros"""
    a = tuple(to_rational(v) for v in a)
    c = tuple(to_rational(v) for v in c)
    if c[2] == 0:
        raise DegenerateFamily("c2 = 0 no sistema reduzido")
    mu = -a[2] / c[2]
    for k in (1, 3):
        if a[k] != -mu * c[k]:
            raise MalformedReduction(f"a{k} = {a[k]} difere de -mu*c{k} = {-mu * c[k]}")
    return KolmogorovParams(a0=a[0], c0=c[0], c1=c[1], c2=c[2], c3=c[3], mu=mu)
