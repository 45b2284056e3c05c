"""
Configurações do projeto para a análise qualitativa da família de Kolmogorov
"""

import json
import os
import sys
import yaml
from dataclasses import dataclass, field, fields
from typing import Any, Dict, List, Optional
from pathlib import Path
from loguru import logger
from dotenv import load_dotenv

# Carregar variáveis de ambiente do arquivo .env
load_dotenv()

PROJECT_ROOT = Path(__file__).parent.parent
CONFIG_DIR = PROJECT_ROOT / 'config'
DEFAULT_ANALYSIS_CONFIG = CONFIG_DIR / 'analysis_config.yaml'
DEFAULT_TABLES_PATH = CONFIG_DIR / 'classification_tables.yaml'
DEFAULT_ERRATA_PATH = CONFIG_DIR / 'errata.json'


@dataclass
class AnalysisConfig:
    """Parâmetros numéricos da integração, do traçado e da contagem de regiões"""
    separatrix_epsilon: float = 1e-6
    dedup_tolerance: float = 1e-4
    grid_resolution: int = 1024
    line_width_px: int = 2
    min_region_pixels: int = 20
    max_steps: int = 20000
    rtol: float = 1e-9
    atol: float = 1e-12
    max_step_disc: float = 0.05
    plane_box: float = 10.0
    capture_radius: float = 1e-6
    degenerate_capture_radius: float = 1e-4
    blowup_offset: float = 1e-3
    stiff_step_ratio: float = 1e-4
    stiff_window: int = 20
    winding_min_samples: int = 1024
    winding_residue_gate: float = 0.05
    center_manifold_order: int = 4
    center_manifold_max_order: int = 8
    blowup_max_depth: int = 4
    threads: int = 4
    seed: int = 42

    def __post_init__(self):
        for name in ('separatrix_epsilon', 'dedup_tolerance', 'rtol', 'atol',
                     'max_step_disc', 'plane_box', 'capture_radius', 'degenerate_capture_radius',
                     'blowup_offset', 'stiff_step_ratio', 'winding_residue_gate'):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} deve ser positivo")
        for name in ('grid_resolution', 'line_width_px', 'max_steps', 'winding_min_samples',
                     'center_manifold_order', 'blowup_max_depth', 'stiff_window', 'threads'):
            if int(getattr(self, name)) < 1:
                raise ValueError(f"{name} deve ser um inteiro positivo")
        if self.center_manifold_max_order < self.center_manifold_order:
            raise ValueError("center_manifold_max_order não pode ser menor que center_manifold_order")

    @classmethod
    def from_yaml(cls, config_path: str) -> 'AnalysisConfig':
        """Carrega configuração de um arquivo YAML"""
        try:
            with open(config_path, 'r', encoding='utf-8') as f:
                data = yaml.safe_load(f) or {}

            known = {f.name for f in fields(cls)}
            values = {}
            for key, value in (data.get('analysis') or {}).items():
                if key not in known:
                    raise ValueError(f"Campo desconhecido em analysis: {key}")
                values[key] = value
            return cls(**values)
        except Exception as e:
            logger.error(f"Erro ao carregar configuração: {e}")
            raise

    @classmethod
    def from_env(cls) -> 'AnalysisConfig':
        """Carrega o YAML indicado pelo ambiente e aplica PHASEPORT_THREADS"""
        path = Path(os.getenv('PHASEPORT_CONFIG', str(DEFAULT_ANALYSIS_CONFIG)))
        config = cls.from_yaml(str(path)) if path.exists() else cls()
        threads = os.getenv('PHASEPORT_THREADS')
        if threads:
            config.threads = int(threads)
            config.__post_init__()
        return config

    def to_dict(self) -> Dict[str, Any]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


@dataclass
class TablesConfig:
    """Tabelas de classificação carregadas do YAML declarativo"""
    cases: List[Dict[str, Any]] = field(default_factory=list)
    finite_rows: Dict[str, Dict[str, Any]] = field(default_factory=dict)
    global_rows: Dict[str, List[Dict[str, Any]]] = field(default_factory=dict)
    o1_rules: List[Dict[str, Any]] = field(default_factory=list)
    o1_signatures: List[Dict[str, Any]] = field(default_factory=list)
    l_index: Dict[str, int] = field(default_factory=dict)
    elliptic_labels: List[str] = field(default_factory=list)
    captions: Dict[str, List[int]] = field(default_factory=dict)
    designated_witnesses: Dict[str, Dict[str, str]] = field(default_factory=dict)

    def __post_init__(self):
        if not self.cases:
            raise ValueError("cases não pode estar vazio")
        if not self.finite_rows:
            raise ValueError("finite_rows não pode estar vazio")
        for row_id in self.global_rows:
            if row_id not in self.finite_rows:
                raise ValueError(f"Linha global {row_id} sem linha finita correspondente")

    @classmethod
    def from_yaml(cls, config_path: str = str(DEFAULT_TABLES_PATH)) -> 'TablesConfig':
        """Carrega as tabelas de um arquivo YAML"""
        try:
            with open(config_path, 'r', encoding='utf-8') as f:
                data = yaml.safe_load(f)

            return cls(
                cases=data.get('cases', []),
                finite_rows={str(k): v for k, v in data.get('finite_rows', {}).items()},
                global_rows={str(k): v for k, v in data.get('global_rows', {}).items()},
                o1_rules=data.get('o1_rules', []),
                o1_signatures=data.get('o1_signatures', []),
                l_index={str(k): int(v) for k, v in data.get('l_index', {}).items()},
                elliptic_labels=list(data.get('elliptic_labels', [])),
                captions={str(k): list(v) for k, v in data.get('captions', {}).items()},
                designated_witnesses=data.get('designated_witnesses', {}),
            )
        except Exception as e:
            logger.error(f"Erro ao carregar tabelas: {e}")
            raise


def load_errata(errata_path: str = str(DEFAULT_ERRATA_PATH)) -> Dict[str, Any]:
    """Carrega as anotações de errata"""
    try:
        with open(errata_path, 'r', encoding='utf-8') as f:
            return json.load(f)
    except Exception as e:
        logger.error(f"Erro ao carregar errata: {e}")
        raise


LOG_FILE_PATTERN = "phaseport_{time:YYYY-MM-DD}.log"
LOG_ROTATION = "10 MB"
LOG_RETENTION = 10


def setup_logging(log_level: str = "INFO", debug: bool = False, log_dir: Optional[str] = None) -> Path:
    """
    Configura o logging do loguru

    Cada registro leva o parâmetro em análise (extra "params", "-" fora de
    uma análise). O console vai para stderr porque stdout fica para o JSON.

    Args:
        log_level: nível do arquivo e do console
        debug: console em DEBUG com origem da chamada
        log_dir: diretório dos arquivos (PHASEPORT_LOG_DIR ou logs/ por padrão)

    Returns:
        Diretório dos arquivos de log
    """
    logger.remove()
    logger.configure(extra={'params': '-'})

    directory = Path(log_dir or os.getenv('PHASEPORT_LOG_DIR', 'logs'))
    logger.add(
        str(directory / LOG_FILE_PATTERN),
        rotation=LOG_ROTATION,
        retention=LOG_RETENTION,
        level="DEBUG" if debug else log_level,
        format="{time:YYYY-MM-DD HH:mm:ss.SSS} | {level: <8} | {thread.name} | {extra[params]} | "
               "{name}:{function}:{line} | {message}",
        encoding="utf-8",
    )

    if debug:
        logger.add(
            sys.stderr,
            level="DEBUG",
            format="<green>{time:HH:mm:ss}</green> | <level>{level}</level> | <yellow>{extra[params]}</yellow> | "
                   "<cyan>{name}</cyan>:<cyan>{function}</cyan>:<cyan>{line}</cyan> | {message}"
        )
    else:
        logger.add(
            sys.stderr,
            level=log_level,
            format="<green>{time:HH:mm:ss}</green> | <level>{level}</level> | {message}"
        )
    return directory
