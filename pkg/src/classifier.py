"""
Classificador de ponta a ponta: caso, subcaso, linha global e relatório completo
"""

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from loguru import logger

from blowup import (
    divisor_point_types, family_divisor_points, o1_signature, o2_classify, o2_closed_form_type,
)
from conditions import all_hold, compile_conditions
from config import AnalysisConfig, load_errata
from exceptions import (
    CrossCheckMismatch, DegenerateFamily, HypothesisViolation, PhasePortraitError, WitnessNotFound,
)
from family import HypothesisReport, KolmogorovParams, SymmetryOp, check_hypotheses, normalize
from index import IndexLedger, numerical_index_ledger, poincare_hopf_check
from portrait import PortraitBuilder, SeparatrixConfiguration
from singular import LocalType, SingularPoint, classify_finite_closed_form, classify_finite_generic
from tables import ClassificationTables, GlobalRow, load_tables

SCHEMA_VERSION = 1

WITNESS_GRID = {
    'a0': [0, 1, 2, 3],
    'c0': [-2, -1, Fraction(-1, 2), 0, Fraction(1, 2), 1, 2],
    'c1': [0, 1],
    'c2': [1, -1, 2, -2],
    'c3': [0, 1, 2, 3],
    'mu': [-3, Fraction(-5, 2), -2, Fraction(-3, 2), Fraction(-3, 4), Fraction(-1, 2),
           0, Fraction(1, 2), 1, 2, 3],
}
RANDOM_WITNESS_DRAWS = 20000


@dataclass
class CaseLabel:
    """Caso principal, subcaso e condição da sublinha global"""
    major: int
    subcase: str
    mu_branch: Optional[str] = None

    def __post_init__(self):
        if not self.subcase.startswith(f"{self.major}."):
            raise ValueError(f"Subcaso {self.subcase} incompatível com o caso {self.major}")

    def __str__(self) -> str:
        return self.subcase + (f" [{self.mu_branch}]" if self.mu_branch else "")


@dataclass
class PortraitReport:
    """Relatório de um ponto do espaço de parâmetros"""
    params: KolmogorovParams
    normalized: KolmogorovParams
    symmetry_ops: List[SymmetryOp]
    hypotheses: HypothesisReport
    case: CaseLabel
    finite_points: List[SingularPoint]
    o1_label: str
    o2_type: LocalType
    o2_printed: str
    g_label: str
    caption: Optional[Tuple[int, int]] = None
    s_count: Optional[int] = None
    r_count: Optional[int] = None
    r_count_raster: Optional[int] = None
    index_ledger: Optional[IndexLedger] = None
    errata: List[str] = field(default_factory=list)
    cross_checks: List[str] = field(default_factory=list)
    configuration: Optional[SeparatrixConfiguration] = None

    @property
    def caption_matches(self) -> Optional[bool]:
        if self.caption is None or self.s_count is None:
            return None
        return (self.r_count, self.s_count) == self.caption

    def to_dict(self, include_separatrices: bool = False) -> Dict[str, Any]:
        data = {
            'schema_version': SCHEMA_VERSION,
            'params': self.params.as_dict(),
            'normalized_params': self.normalized.as_dict(),
            'symmetry_ops': [op.value for op in self.symmetry_ops],
            'hypotheses': self.hypotheses.to_dict(),
            'case': self.case.major,
            'subcase': self.case.subcase,
            'mu_branch': self.case.mu_branch,
            'finite_points': [p.to_dict() for p in self.finite_points],
            'o1_label': self.o1_label,
            'o2_type': self.o2_type.value,
            'o2_printed': self.o2_printed,
            'g_label': self.g_label,
            'caption': {'r': self.caption[0], 's': self.caption[1]} if self.caption else None,
            's': self.s_count,
            'r': self.r_count,
            'r_raster': self.r_count_raster,
            'index_ledger': self.index_ledger.to_dict() if self.index_ledger else None,
            'errata': list(self.errata),
            'cross_checks': list(self.cross_checks),
        }
        if include_separatrices and self.configuration is not None:
            data['separatrices'] = self.configuration.to_dict()
        return data


class PhasePortraitClassifier:
    """Decide o retrato global pelas tabelas e confere com o pipeline genérico"""

    def __init__(self, tables: Optional[ClassificationTables] = None,
                 config: Optional[AnalysisConfig] = None,
                 errata: Optional[Dict[str, Any]] = None):
        self.tables = tables or load_tables()
        self.config = config or AnalysisConfig()
        self.errata = errata if errata is not None else load_errata()
        self.last_report: Optional[PortraitReport] = None

    # -- classificação fechada ---------------------------------------------

    def prepare(self, params: KolmogorovParams) -> Tuple[KolmogorovParams, List[SymmetryOp], HypothesisReport]:
        normalized, ops = normalize(params)
        if normalized.mu == -1:
            raise DegenerateFamily("mu_equals_minus_one: todos os pontos do equador são singulares")
        report = check_hypotheses(normalized)
        if not report.satisfies_H2:
            raise HypothesisViolation(report, required="H2")
        return normalized, ops, report

    def errata_flags(self, params: KolmogorovParams, row: GlobalRow) -> List[str]:
        flags = []
        for section in ('global_labels', 'o2_types'):
            for entry in self.errata.get(section, []):
                if entry.get('row') != row.row_id:
                    continue
                if all_hold(compile_conditions(entry.get('when')), params):
                    flags.append(entry['id'])
        return flags

    def classify(self, params: KolmogorovParams) -> PortraitReport:
        """
        Classificação pelas tabelas, sem traçado

        Args:
            params: parâmetros quaisquer com c2 != 0 (normalizados aqui)

        Returns:
            PortraitReport com caso, rótulos de O1/O2 e rótulo G
        """
        normalized, ops, hypotheses = self.prepare(params)
        finite = classify_finite_closed_form(normalized, self.tables)
        row = self.tables.global_row(normalized, finite.subcase)
        o1 = row.o1

        report = PortraitReport(
            params=params,
            normalized=normalized,
            symmetry_ops=ops,
            hypotheses=hypotheses,
            case=CaseLabel(major=finite.case, subcase=finite.subcase, mu_branch=row.branch),
            finite_points=finite.points,
            o1_label=o1,
            o2_type=o2_closed_form_type(normalized),
            o2_printed=row.o2_printed,
            g_label=row.g_label,
            caption=self.tables.caption(row.g_label),
            errata=hypotheses.interpretation_flags + self.errata_flags(normalized, row),
        )
        logger.info(f"{params.label()}: subcaso {report.case}, O1={o1}, O2={report.o2_type.value}, {row.g_label}")
        self.last_report = report
        return report

    # -- conferências cruzadas ----------------------------------------------

    def check_finite_types(self, report: PortraitReport) -> List[SingularPoint]:
        generic = classify_finite_generic(report.normalized, max_order=self.config.center_manifold_max_order)
        by_key = {p.key: p for p in generic}
        condition = f"linha {report.case.subcase}"
        for point in report.finite_points:
            other = by_key.get(point.key)
            if other is None or other.local_type is not point.local_type:
                raise CrossCheckMismatch(
                    f"tipo de {point.name}", point.local_type.value if point.local_type else None,
                    other.local_type.value if other and other.local_type else None,
                    condition=condition, params=report.params.as_dict(),
                )
        return generic

    def _check_o1(self, report: PortraitReport) -> bool:
        """Rótulo de O1 da tabela contra o da assinatura da dessingularização"""
        try:
            signature = o1_signature(report.normalized, self.config.blowup_max_depth)
        except PhasePortraitError as e:
            logger.warning(f"Assinatura de O1 indisponível para {report.params.label()}: {e}")
            return False
        generic = self.tables.o1_label_for_signature(signature)
        if generic != report.o1_label:
            raise CrossCheckMismatch("rótulo de O1", report.o1_label, generic or signature,
                                     condition=report.case.subcase, params=report.params.as_dict())
        return True

    def _check_divisor(self, report: PortraitReport) -> None:
        expected = divisor_point_types(report.normalized)
        try:
            found = family_divisor_points(report.normalized, self.config.blowup_max_depth)
        except PhasePortraitError as e:
            logger.warning(f"Dessingularização genérica indisponível para {report.params.label()}: {e}")
            return
        for label, point in found.items():
            closed_type = expected[label][1]
            if point.local_type is not closed_type:
                raise CrossCheckMismatch(f"ponto {label} do divisor", closed_type.value, point.local_type.value,
                                         condition=f"O1 {report.o1_label}", params=report.params.as_dict())

    def _closed_form_ledger(self, report: PortraitReport) -> IndexLedger:
        finite = [(p.name, p.local_type.index) for p in report.finite_points]
        infinite = [("O1", self.tables.l_index(report.o1_label)), ("O2", report.o2_type.index)]
        ledger = poincare_hopf_check(finite, infinite)
        for entry in ledger.entries:
            entry.source = "closed_form"
        return ledger

    def _check_numerical_ledger(self, report: PortraitReport, closed: IndexLedger) -> Optional[IndexLedger]:
        try:
            numerical = numerical_index_ledger(report.normalized, self.config.winding_min_samples,
                                               self.config.winding_residue_gate)
        except PhasePortraitError as e:
            logger.warning(f"Índices numéricos indisponíveis para {report.params.label()}: {e}")
            return None
        for entry in closed.entries:
            value = numerical.index_of(entry.name)
            if value is not None and value != entry.index:
                raise CrossCheckMismatch(f"índice de {entry.name}", entry.index, value,
                                         condition=report.case.subcase, params=report.params.as_dict())
        return numerical

    def full_report(self, params: KolmogorovParams, trace: bool = False) -> PortraitReport:
        """
        classify mais conferências com o pipeline genérico e, opcionalmente, o traçado

        Args:
            params: parâmetros
            trace: traça as separatrizes e conta S e R

        Returns:
            PortraitReport completo
        """
        report = self.classify(params)

        if self._check_o1(report):
            report.cross_checks.append("o1_label")

        generic = self.check_finite_types(report)
        report.cross_checks.append("finite_types")

        o2_generic = o2_classify(report.normalized)
        if o2_generic is not report.o2_type:
            raise CrossCheckMismatch("tipo de O2", report.o2_type.value, o2_generic.value,
                                     condition=f"mu={report.normalized.mu}", params=params.as_dict())
        report.cross_checks.append("o2_type")

        self._check_divisor(report)
        report.cross_checks.append("divisor")

        ledger = self._closed_form_ledger(report)
        if not ledger.balanced:
            raise CrossCheckMismatch("Poincaré-Hopf", 2, ledger.total,
                                     condition=f"O1 {report.o1_label}", params=params.as_dict())
        report.index_ledger = ledger
        if self._check_numerical_ledger(report, ledger) is not None:
            report.cross_checks.append("winding_indices")

        if trace:
            configuration = PortraitBuilder(report.normalized, self.config, finite=generic).trace()
            report.configuration = configuration
            report.s_count = configuration.s_count
            report.r_count = configuration.r_count
            report.r_count_raster = configuration.r_count_raster
            if report.r_count_raster is not None and report.r_count_raster != report.r_count:
                logger.warning(f"R por Euler ({report.r_count}) difere do flood fill ({report.r_count_raster})")
            if report.caption_matches is False:
                logger.warning(f"{report.g_label}: traçado deu [R={report.r_count}, S={report.s_count}], "
                               f"legenda {list(report.caption)}")

        self.last_report = report
        return report

    # -- testemunhas --------------------------------------------------------

    def row_key(self, params: KolmogorovParams) -> Optional[str]:
        """Chave da sublinha global de params (None fora de H2 ou sem linha única)"""
        try:
            normalized, _, _ = self.prepare(params)
            row_id = self.tables.finite_row(normalized).row_id
            return self.tables.global_row(normalized, row_id).key
        except (PhasePortraitError, ValueError, ZeroDivisionError):
            return None

    def _scan(self, candidates: List[KolmogorovParams]) -> Dict[str, KolmogorovParams]:
        found: Dict[str, KolmogorovParams] = {}
        for params in candidates:
            if any(v < 0 for v in (params.a0, params.c1, params.c3)):
                continue
            key = self.row_key(params)
            if key is not None and key not in found:
                found[key] = params
        return found

    def _grid_candidates(self) -> List[List[KolmogorovParams]]:
        chunks = []
        names = ('c0', 'c1', 'c2', 'c3', 'mu')
        for a0 in WITNESS_GRID['a0']:
            chunk = [KolmogorovParams(a0, *values)
                     for values in itertools.product(*(WITNESS_GRID[n] for n in names))]
            chunks.append(chunk)
        # linhas sobre c3^2 = 4 c0 c2 e sobre beta = 0
        tangent = []
        for a0, c1, c2, c3, mu in itertools.product(WITNESS_GRID['a0'], WITNESS_GRID['c1'], WITNESS_GRID['c2'],
                                                     [1, 2, 3], WITNESS_GRID['mu']):
            tangent.append(KolmogorovParams(a0, Fraction(c3 * c3, 4 * c2), c1, c2, c3, mu))
        for c0, c1, c2, c3 in itertools.product(WITNESS_GRID['c0'], [1], WITNESS_GRID['c2'], [0, 1, 2, 3]):
            a0 = 2 * Fraction(c0) - Fraction(c3 * c3, 4 * c2)
            if a0 >= 0:
                tangent.append(KolmogorovParams(a0, c0, c1, c2, c3, -2))
        chunks.append(tangent)
        return chunks

    def random_candidates(self, draws: int, seed: int) -> List[KolmogorovParams]:
        rng = np.random.default_rng(seed)
        numerators = rng.integers(-6, 7, size=(draws, 6))
        denominators = rng.choice([1, 2, 3, 4], size=(draws, 6))
        candidates = []
        for nums, dens in zip(numerators, denominators):
            values = [Fraction(int(n), int(d)) for n, d in zip(nums, dens)]
            values[0], values[2], values[4] = abs(values[0]), abs(values[2]), abs(values[4])
            if values[3] != 0:
                candidates.append(KolmogorovParams(*values))
        return candidates

    def expected_row_keys(self) -> List[str]:
        return [row.key for row in self.tables.all_global_rows()]

    def enumerate_representatives(self, strict: bool = True,
                                  seed: Optional[int] = None) -> List[Tuple[str, KolmogorovParams]]:
        """
        Uma testemunha racional por sublinha global, em ordem de tabela

        Args:
            strict: levanta WitnessNotFound se alguma sublinha ficar sem testemunha
            seed: semente da busca aleatória complementar

        Returns:
            Lista (chave da sublinha, parâmetros)
        """
        seed = self.config.seed if seed is None else seed
        expected = self.expected_row_keys()
        found: Dict[str, KolmogorovParams] = {}

        with ThreadPoolExecutor(max_workers=self.config.threads) as executor:
            for partial in executor.map(self._scan, self._grid_candidates()):
                for key, params in partial.items():
                    found.setdefault(key, params)

        missing = [key for key in expected if key not in found]
        if missing:
            logger.debug(f"Grade deixou {len(missing)} sublinhas sem testemunha; busca aleatória")
            for key, params in self._scan(self.random_candidates(RANDOM_WITNESS_DRAWS, seed)).items():
                found.setdefault(key, params)
            missing = [key for key in expected if key not in found]

        if missing:
            logger.warning(f"Sublinhas sem testemunha: {missing}")
            if strict:
                raise WitnessNotFound(missing)
        logger.info(f"Testemunhas encontradas para {len(expected) - len(missing)}/{len(expected)} sublinhas")
        return [(key, found[key]) for key in expected if key in found]

    def distinctness_collisions(self, reports: List[PortraitReport]) -> List[Dict[str, Any]]:
        """
        Rótulos G diferentes que compartilham legenda [R,S], tipos finitos e tipos no infinito
        """
        groups: Dict[Tuple, set] = {}
        for report in reports:
            finite_types = tuple(sorted(p.local_type.abbreviation for p in report.finite_points))
            signature = (report.caption, finite_types, report.o1_label, report.o2_type.value)
            groups.setdefault(signature, set()).add(report.g_label)
        collisions = []
        for signature, labels in groups.items():
            if len(labels) > 1:
                collisions.append({'labels': sorted(labels), 'caption': signature[0],
                                   'finite_types': list(signature[1]), 'o1': signature[2], 'o2': signature[3]})
        return collisions

    def generate_summary_report(self) -> str:
        """
        Gera um relatório resumido da última classificação

        Returns:
            String com o relatório
        """
        if not self.last_report:
            return "Nenhuma classificação realizada ainda."

        result = self.last_report
        report = []
        report.append("=" * 50)
        report.append("RELATÓRIO DO RETRATO DE FASE")
        report.append("=" * 50)
        report.append(f"Parâmetros: {result.params.label()}")
        if result.symmetry_ops:
            report.append(f"Normalizados: {result.normalized.label()} "
                          f"({', '.join(op.value for op in result.symmetry_ops)})")
        report.append(f"Subcaso: {result.case}")
        report.append(f"Retrato global: {result.g_label}")
        if result.caption:
            report.append(f"Legenda: [R={result.caption[0]}, S={result.caption[1]}]")
        report.append("")

        report.append("PONTOS FINITOS:")
        report.append("-" * 30)
        for point in result.finite_points:
            kind = point.local_type.value if point.local_type else "?"
            report.append(f"  {point.name} em {point.float_location()}: {kind}")
        report.append("")

        report.append("INFINITO:")
        report.append("-" * 30)
        report.append(f"  O1: {result.o1_label}")
        report.append(f"  O2: {result.o2_type.value} (impresso: {result.o2_printed})")
        report.append("")

        if result.s_count is not None:
            report.append("TRAÇADO:")
            report.append("-" * 30)
            report.append(f"  S = {result.s_count}, R = {result.r_count} (flood fill: {result.r_count_raster})")
            report.append("")

        if result.index_ledger:
            status = "equilibrado" if result.index_ledger.balanced else "DESEQUILIBRADO"
            report.append(f"Balanço de índices: {result.index_ledger.total} ({status})")
        if result.errata:
            report.append(f"Errata: {', '.join(result.errata)}")
        return "\n".join(report)


def classify(params: KolmogorovParams) -> PortraitReport:
    return PhasePortraitClassifier().classify(params)


def full_report(params: KolmogorovParams, trace: bool = False,
                config: Optional[AnalysisConfig] = None) -> PortraitReport:
    return PhasePortraitClassifier(config=config).full_report(params, trace=trace)


def enumerate_representatives(strict: bool = True) -> List[Tuple[str, KolmogorovParams]]:
    return PhasePortraitClassifier().enumerate_representatives(strict=strict)
