"""
Integradores de passo adaptativo para o campo normalizado

RKF45 é o integrador principal. Quando o passo explícito desaba perto de
pontos degenerados, o traçado continua com o Radau implícito do scipy.
"""

from dataclasses import dataclass, field
from typing import Callable, List, Optional, Tuple

import numpy as np
from loguru import logger
from scipy.integrate import Radau

VectorField = Callable[[np.ndarray], np.ndarray]
StopCondition = Callable[[np.ndarray], Optional[str]]

# limite artificial do parâmetro de arco para o Radau (a parada vem de stop)
RADAU_ARC_BOUND = 1e6


@dataclass
class IntegrationResult:
    """Pontos aceitos, parâmetro final e motivo da parada"""
    points: List[np.ndarray] = field(default_factory=list)
    reason: str = "max_steps"
    steps: int = 0
    rejected: int = 0
    arc_length: float = 0.0
    t: float = 0.0


class RKF45:
    """
    Runge-Kutta-Fehlberg 4(5)

    Avança com a combinação de 4a ordem; a diferença para a de 5a ordem
    controla o passo. Com stiff_window > 0, uma sequência de stiff_window
    passos aceitos abaixo de h_floor encerra com motivo "stiff".
    """

    BT = {
        0: [1 / 4],
        1: [3 / 32, 9 / 32],
        2: [1932 / 2197, -7200 / 2197, 7296 / 2197],
        3: [439 / 216, -8, 3680 / 513, -845 / 4104],
        4: [-8 / 27, 2, -3544 / 2565, 1859 / 4104, -11 / 40],
        # pesos da combinação de 4a ordem
        5: [25 / 216, 0, 1408 / 2565, 2197 / 4104, -1 / 5, 0],
    }

    # pesos de 4a ordem menos os de 5a ordem
    TR = [1 / 360, 0, -128 / 4275, -2197 / 75240, 1 / 50, 2 / 55]

    def __init__(self, tolerance: float = 1e-9, h_max: float = 0.02, h_min: float = 1e-14,
                 safety: float = 0.9, h_floor: float = 0.0, stiff_window: int = 0):
        self.tolerance = tolerance
        self.h_max = h_max
        self.h_min = h_min
        self.safety = safety
        self.h_floor = h_floor
        self.stiff_window = stiff_window
        self.s = 6

    def step(self, f: VectorField, y: np.ndarray, h: float) -> Tuple[np.ndarray, float]:
        """
        Um passo de tamanho h

        Returns:
            (novo estado, norma máxima do erro local estimado)
        """
        k = [f(y)]
        for stage in range(self.s - 1):
            increment = sum(b * ki for b, ki in zip(self.BT[stage], k))
            k.append(f(y + h * increment))
        y_new = y + h * sum(b * ki for b, ki in zip(self.BT[self.s - 1], k))
        error = h * sum(t * ki for t, ki in zip(self.TR, k))
        return y_new, float(np.max(np.abs(error)))

    def integrate(self, f: VectorField, y0, max_steps: int = 20000,
                  stop: Optional[StopCondition] = None, h0: Optional[float] = None,
                  t_end: Optional[float] = None) -> IntegrationResult:
        """
        Integra até a condição de parada, t_end ou max_steps passos aceitos

        Args:
            f: campo autônomo
            y0: estado inicial
            max_steps: limite de passos aceitos
            stop: devolve o motivo da parada ou None para continuar
            h0: passo inicial (h_max por padrão)
            t_end: parâmetro final; o último passo é encurtado para acertá-lo

        Returns:
            IntegrationResult
        """
        y = np.asarray(y0, dtype=float)
        h = h0 if h0 is not None else self.h_max
        result = IntegrationResult(points=[y.copy()])
        small_run = 0

        while result.steps < max_steps:
            if t_end is not None:
                remaining = t_end - result.t
                if remaining <= 0.0:
                    result.reason = "t_end"
                    return result
                h = min(h, remaining)
            try:
                y_new, err = self.step(f, y, h)
            except (FloatingPointError, OverflowError, ZeroDivisionError):
                err = float('inf')
                y_new = y

            if not np.all(np.isfinite(y_new)) or not np.isfinite(err):
                h *= 0.25
                result.rejected += 1
                if h < self.h_min:
                    result.reason = "stiff"
                    return result
                continue

            accepted = err <= self.tolerance or h <= self.h_min
            if accepted:
                result.arc_length += float(np.linalg.norm(y_new - y))
                result.t += h
                y = y_new
                result.points.append(y.copy())
                result.steps += 1
                if stop is not None:
                    reason = stop(y)
                    if reason is not None:
                        result.reason = reason
                        return result
                small_run = small_run + 1 if h < self.h_floor else 0
                if self.stiff_window and small_run >= self.stiff_window:
                    result.reason = "stiff"
                    return result

            if err == 0.0:
                factor = 4.0
            else:
                factor = min(4.0, max(0.1, self.safety * (self.tolerance / err) ** 0.2))
            if not accepted:
                result.rejected += 1
            h = min(self.h_max, max(self.h_min, h * factor))

        logger.debug(f"RKF45 atingiu {max_steps} passos ({result.rejected} rejeitados)")
        return result


def radau_integrate(f: VectorField, y0, max_steps: int = 20000,
                    stop: Optional[StopCondition] = None, h_max: float = np.inf,
                    rtol: float = 1e-9, atol: float = 1e-12) -> IntegrationResult:
    """
    Mesmo contrato de RKF45.integrate, passo a passo com o Radau IIA de ordem 5

    Returns:
        IntegrationResult; motivo "stiff" se o Radau também falhar
    """
    y = np.asarray(y0, dtype=float)
    result = IntegrationResult(points=[y.copy()])
    solver = Radau(lambda t, state: f(state), 0.0, y, RADAU_ARC_BOUND,
                   max_step=h_max, rtol=rtol, atol=atol)

    while result.steps < max_steps:
        message = solver.step()
        if solver.status == 'failed':
            logger.debug(f"Radau falhou após {result.steps} passos: {message}")
            result.reason = "stiff"
            return result
        current = np.array(solver.y, dtype=float)
        result.arc_length += float(np.linalg.norm(current - y))
        result.t = float(solver.t)
        y = current
        result.points.append(y.copy())
        result.steps += 1
        if stop is not None:
            reason = stop(y)
            if reason is not None:
                result.reason = reason
                return result
        if solver.status == 'finished':
            result.reason = "t_end"
            return result

    logger.debug(f"Radau atingiu {max_steps} passos")
    return result
