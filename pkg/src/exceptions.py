"""
Hierarquia de erros da análise qualitativa
"""

from typing import Any, Dict, List, Optional


class PhasePortraitError(Exception):
    """Erro base de todas as camadas de análise"""


class ZeroPolynomial(PhasePortraitError):
    """Operação indefinida para o polinômio nulo"""


class NotDivisible(PhasePortraitError):
    """Algum termo não é divisível pela potência pedida"""


class ParseError(PhasePortraitError):
    """Texto de polinômio ou parâmetro inválido"""


class HypothesisViolation(PhasePortraitError):
    """Parâmetros fora das hipóteses exigidas"""

    def __init__(self, report: Any, required: str = "H2"):
        self.report = report
        self.required = required
        violations = ", ".join(report.violations) or "nenhuma"
        super().__init__(f"Hipótese {required} violada: {violations}")


class DegenerateFamily(PhasePortraitError):
    """Família degenerada (mu = -1 ou c2 = 0), fora do escopo da classificação"""

    def __init__(self, reason: str):
        self.reason = reason
        super().__init__(f"Família degenerada: {reason}")


class InvariantDegenerate(PhasePortraitError):
    """Invariante de Darboux degenerado (a0 + c0*mu = 0)"""


class MalformedReduction(PhasePortraitError):
    """Coeficientes de Lotka-Volterra fora do padrão esperado"""


class InfinitelyManyInfinite(PhasePortraitError):
    """Todo o equador é formado por pontos singulares"""


class NotHyperbolic(PhasePortraitError):
    """Matriz jacobiana sem autovalores de parte real não nula"""


class OrderInsufficient(PhasePortraitError):
    """A variedade central não decidiu o tipo até a ordem pedida"""

    def __init__(self, order: int):
        self.order = order
        super().__init__(f"Todos os termos da deriva se anulam até a ordem {order}")


class NoMatchingRow(PhasePortraitError):
    """Nenhuma linha (ou mais de uma) das tabelas corresponde aos parâmetros"""


class NoMatchingCase(PhasePortraitError):
    """Nenhum rótulo L (ou mais de um) corresponde aos parâmetros"""


class NotSingularAtOrigin(PhasePortraitError):
    """A origem não é ponto singular do sistema"""


class DepthExceeded(PhasePortraitError):
    """Profundidade máxima de explosões atingida"""


class SingularOnCircle(PhasePortraitError):
    """Há um ponto singular sobre (ou dentro de) o círculo de integração"""


class NonIntegerWinding(PhasePortraitError):
    """Número de voltas longe de um inteiro"""

    def __init__(self, value: float, residue: float):
        self.value = value
        self.residue = residue
        super().__init__(f"Número de voltas {value:.4f} com resíduo {residue:.4f}")


class OddSectorDifference(PhasePortraitError):
    """e - h ímpar não define índice inteiro"""


class UnresolvedDegenerate(PhasePortraitError):
    """Ponto degenerado sem resolução disponível para o traçado"""


class ResolutionInsufficient(PhasePortraitError):
    """Separatrizes próximas demais para a grade de rasterização"""


class CrossCheckMismatch(PhasePortraitError):
    """Divergência entre o classificador fechado e o pipeline genérico"""

    def __init__(self, what: str, closed_form: Any, generic: Any,
                 condition: Optional[str] = None, params: Optional[Dict[str, str]] = None):
        self.what = what
        self.closed_form = closed_form
        self.generic = generic
        self.condition = condition
        self.params = params or {}
        super().__init__(
            f"Divergência em {what}: forma fechada={closed_form} genérico={generic}"
            + (f" (condição: {condition})" if condition else "")
        )

    def to_dict(self) -> Dict[str, Any]:
        """Serializa os dois veredictos"""
        return {
            'error': 'CrossCheckMismatch',
            'what': self.what,
            'closed_form': str(self.closed_form),
            'generic': str(self.generic),
            'condition': self.condition,
            'params': self.params,
        }


class WitnessNotFound(PhasePortraitError):
    """Nenhuma testemunha encontrada para a linha da tabela"""

    def __init__(self, rows: List[str]):
        self.rows = rows
        super().__init__(f"Sem testemunha para as linhas: {', '.join(rows)}")


class SeparatrixNotTerminated(PhasePortraitError):
    """Uma separatriz traçada não chegou a nenhum ponto singular"""

    def __init__(self, source: str, termination: str, params: Optional[str] = None):
        self.source = source
        self.termination = termination
        super().__init__(f"Separatriz de {source} terminou em {termination}"
                         + (f" para {params}" if params else ""))
