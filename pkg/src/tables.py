"""
Acesso às tabelas de classificação com as condições já compiladas
"""

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

from loguru import logger

from conditions import Condition, ParamEnvironment, compile_conditions
from config import DEFAULT_TABLES_PATH, TablesConfig
from exceptions import NoMatchingCase, NoMatchingRow
from family import KolmogorovParams


@dataclass
class FiniteRow:
    """Linha de subcaso com os tipos dos pontos finitos"""
    row_id: str
    case: int
    conditions: List[Condition]
    types: Dict[str, str]

    def matches(self, env: ParamEnvironment) -> bool:
        return all(c.holds(env) for c in self.conditions)


@dataclass
class GlobalRow:
    """Sublinha global: rótulo de O1, tipo impresso de O2 e retrato G"""
    row_id: str
    when: List[Condition]
    o1: str
    o2_printed: str
    g_label: str

    @property
    def branch(self) -> Optional[str]:
        """Texto da condição da sublinha (None quando a linha não se divide)"""
        if not self.when:
            return None
        return ", ".join(str(c) for c in self.when)

    @property
    def key(self) -> str:
        return f"{self.row_id}" + (f" [{self.branch}]" if self.branch else "")

    def matches(self, env: ParamEnvironment) -> bool:
        return all(c.holds(env) for c in self.when)


@dataclass
class O1Rule:
    label: str
    conditions: List[Condition]


@dataclass
class ClassificationTables:
    """Casos, subcasos, sublinhas globais, regras de O1, índices por rótulo L e legendas"""
    raw: TablesConfig
    cases: List[Tuple[int, List[Condition], List[str]]] = field(default_factory=list)
    finite_rows: Dict[str, FiniteRow] = field(default_factory=dict)
    global_rows: Dict[str, List[GlobalRow]] = field(default_factory=dict)
    o1_rules: List[O1Rule] = field(default_factory=list)

    @classmethod
    def from_config(cls, raw: TablesConfig) -> 'ClassificationTables':
        tables = cls(raw=raw)
        for entry in raw.cases:
            tables.cases.append((int(entry['case']), compile_conditions(entry['conditions']),
                                 list(entry.get('points', []))))
        for row_id, entry in raw.finite_rows.items():
            case = int(row_id.split('.')[0])
            tables.finite_rows[row_id] = FiniteRow(
                row_id=row_id, case=case,
                conditions=compile_conditions(entry['conditions']),
                types={str(k): str(v) for k, v in entry['types'].items()},
            )
        for row_id, branches in raw.global_rows.items():
            tables.global_rows[row_id] = [
                GlobalRow(row_id=row_id, when=compile_conditions(b.get('when')),
                          o1=b['o1'], o2_printed=b['o2'], g_label=b['g'])
                for b in branches
            ]
        tables.o1_rules = [O1Rule(label=r['label'], conditions=compile_conditions(r['conditions']))
                           for r in raw.o1_rules]
        logger.debug(f"Tabelas carregadas: {len(tables.finite_rows)} linhas finitas, "
                     f"{sum(len(v) for v in tables.global_rows.values())} sublinhas globais")
        return tables

    def finite_case(self, params: KolmogorovParams) -> int:
        """Caso dos pontos finitos"""
        env = ParamEnvironment(params)
        matches = [case for case, conds, _ in self.cases if all(c.holds(env) for c in conds)]
        if len(matches) != 1:
            raise NoMatchingRow(f"{len(matches)} casos para {params.label()}")
        return matches[0]

    def finite_row(self, params: KolmogorovParams, case: Optional[int] = None) -> FiniteRow:
        """Única linha de subcaso satisfeita pelos parâmetros"""
        env = ParamEnvironment(params)
        case = case if case is not None else self.finite_case(params)
        matches = [row for row in self.finite_rows.values() if row.case == case and row.matches(env)]
        if len(matches) != 1:
            ids = [row.row_id for row in matches]
            raise NoMatchingRow(f"Caso {case}: linhas {ids or 'nenhuma'} para {params.label()}")
        return matches[0]

    def global_row(self, params: KolmogorovParams, row_id: str) -> GlobalRow:
        """Sublinha global dentro da linha row_id"""
        env = ParamEnvironment(params)
        matches = [branch for branch in self.global_rows.get(row_id, []) if branch.matches(env)]
        if len(matches) != 1:
            raise NoMatchingRow(f"Linha {row_id}: {len(matches)} sublinhas para {params.label()}")
        return matches[0]

    def o1_label(self, params: KolmogorovParams) -> str:
        """Rótulo L pelas regras de O1"""
        env = ParamEnvironment(params)
        labels = [rule.label for rule in self.o1_rules if all(c.holds(env) for c in rule.conditions)]
        if len(labels) != 1:
            raise NoMatchingCase(f"O1: {len(labels)} rótulos ({labels}) para {params.label()}")
        return labels[0]

    def o1_label_for_signature(self, signature: Dict[str, str]) -> Optional[str]:
        """Rótulo L do padrão de o1_signatures igual à assinatura (None se nenhum)"""
        for entry in self.raw.o1_signatures:
            pattern = {str(k): str(v) for k, v in entry.items() if k != 'label'}
            if pattern == signature:
                return entry['label']
        return None

    def l_index(self, label: str) -> int:
        try:
            return self.raw.l_index[label]
        except KeyError:
            raise NoMatchingCase(f"Rótulo sem índice: {label}")

    def is_elliptic(self, label: str) -> bool:
        return label in self.raw.elliptic_labels

    def caption(self, g_label: str) -> Optional[Tuple[int, int]]:
        """(R, S) impresso na legenda do retrato"""
        values = self.raw.captions.get(g_label)
        return (int(values[0]), int(values[1])) if values else None

    def all_global_rows(self) -> List[GlobalRow]:
        return [branch for branches in self.global_rows.values() for branch in branches]


@lru_cache(maxsize=4)
def load_tables(path: str = str(DEFAULT_TABLES_PATH)) -> ClassificationTables:
    """Carrega (uma vez por caminho) as tabelas de classificação"""
    return ClassificationTables.from_config(TablesConfig.from_yaml(path))
