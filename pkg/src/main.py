"""
Análise qualitativa da família de Kolmogorov: linha de comando
"""

import itertools
import json
import os
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

import click
import numpy as np
import pandas as pd
from loguru import logger
from tqdm import tqdm

# Adicionar src ao path para imports
sys.path.insert(0, str(Path(__file__).parent))

from blowup import o1_label_from_blowup, o2_classify
from classifier import PhasePortraitClassifier
from compactify import DiscPoint, disc_project
from conditions import ParamEnvironment
from config import AnalysisConfig, setup_logging
from exceptions import (
    CrossCheckMismatch, DegenerateFamily, HypothesisViolation, InvariantDegenerate, PhasePortraitError,
)
from family import (
    PARAM_NAMES, KolmogorovParams, SymmetryOp, build_system, contact_sign_changes, darboux_certificate,
    normalize,
)
from index import numerical_index_ledger
from integrator import RKF45
from poly_core import to_rational
from portrait import RenderOptions, Termination, integrate_orbit, normalized_field, render_svg
from singular import classify_finite_generic
from tables import GlobalRow

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_HYPOTHESIS = 2
EXIT_MISMATCH = 3

SUITES = ('oracle', 'poincare-hopf', 'darboux', 'symmetry', 'contact', 'partition',
          'captions', 'limit-cycles')
MIRROR_TOLERANCE = 1e-7
# janela de tempo (comprimento de arco) das órbitas espelhadas
MIRROR_T_END = 5.0
CONTACT_SAMPLES = 20


def atomic_write(path: str, text: str) -> None:
    """Escreve em arquivo temporário no mesmo diretório e renomeia"""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(dir=str(target.parent), prefix=f".{target.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, 'w', encoding='utf-8') as f:
            f.write(text)
        os.replace(tmp_name, target)
    except Exception:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise


def params_rng(params: KolmogorovParams) -> np.random.Generator:
    """Gerador determinístico derivado dos próprios parâmetros"""
    entropy = [abs(v.numerator) for v in params.values()] + [v.denominator for v in params.values()]
    return np.random.default_rng(entropy)


def emit_json(data: Any, output: Optional[str] = None) -> None:
    text = json.dumps(data, indent=2, ensure_ascii=False)
    if output:
        atomic_write(output, text + "\n")
        click.echo(f"✅ Resultado salvo em {output}", err=True)
    else:
        click.echo(text)


def parse_rational(ctx, param, value):
    """Callback do click: aceita "p/q" ou decimal e converte exatamente"""
    if value is None:
        return None
    try:
        return to_rational(value)
    except PhasePortraitError as e:
        raise click.BadParameter(str(e))


def parse_rational_list(ctx, param, value):
    if value is None:
        return None
    try:
        return [to_rational(item) for item in value.split(',') if item.strip()]
    except PhasePortraitError as e:
        raise click.BadParameter(str(e))


def param_options(func: Callable) -> Callable:
    """Acrescenta --a0 ... --mu ao comando"""
    for name in reversed(PARAM_NAMES):
        func = click.option(f'--{name}', callback=parse_rational, help=f'Parâmetro {name} ("p/q" ou decimal)')(func)
    return func


def params_from_options(options: Dict[str, Any]) -> KolmogorovParams:
    missing = [name for name in PARAM_NAMES if options.get(name) is None]
    if missing:
        raise click.UsageError(f"Parâmetros obrigatórios ausentes: {', '.join('--' + m for m in missing)}")
    return KolmogorovParams(**{name: options[name] for name in PARAM_NAMES})


def exit_with_error(e: Exception) -> None:
    """Ecoa o erro e sai com o código documentado"""
    if isinstance(e, CrossCheckMismatch):
        click.echo(json.dumps(e.to_dict(), indent=2, ensure_ascii=False))
        click.echo(f"❌ Divergência: {e}", err=True)
        sys.exit(EXIT_MISMATCH)
    if isinstance(e, HypothesisViolation):
        click.echo(json.dumps({'error': 'HypothesisViolation', 'required': e.required,
                               'violations': e.report.violations}, ensure_ascii=False))
        click.echo(f"❌ Erro: {e}", err=True)
        sys.exit(EXIT_HYPOTHESIS)
    if isinstance(e, DegenerateFamily):
        click.echo(json.dumps({'error': 'DegenerateFamily', 'violations': [e.reason.split(':')[0]]},
                              ensure_ascii=False))
        click.echo(f"❌ Erro: {e}", err=True)
        sys.exit(EXIT_HYPOTHESIS)
    click.echo(f"❌ Erro: {e}", err=True)
    sys.exit(EXIT_FAILURE)


@dataclass
class SuiteResult:
    """Resultado de uma bateria de verificação"""
    name: str
    checked: int = 0
    failures: List[Dict[str, Any]] = field(default_factory=list)
    skipped: int = 0

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> Dict[str, Any]:
        return {
            'suite': self.name,
            'checked': self.checked,
            'failed': len(self.failures),
            'skipped': self.skipped,
            'passed': self.passed,
            # reprodução mínima: a primeira falha
            'first_failure': self.failures[0] if self.failures else None,
        }


class PortraitAnalyzer:
    """Orquestra classificação, verificação, varreduras e reprodução das tabelas"""

    def __init__(self, config: AnalysisConfig):
        self.config = config
        self.classifier = PhasePortraitClassifier(config=config)

    def _parallel(self, func: Callable, items: List[Any], desc: str) -> List[Any]:
        """Mapeia func sobre items em threads; resultados na ordem de entrada"""
        with ThreadPoolExecutor(max_workers=self.config.threads) as executor:
            return list(tqdm(executor.map(func, items), total=len(items), desc=desc,
                             disable=not sys.stderr.isatty()))

    def _accepts(self, params: KolmogorovParams, require_row: bool) -> bool:
        if require_row:
            return self.classifier.row_key(params) is not None
        try:
            self.classifier.prepare(params)
            return True
        except PhasePortraitError:
            return False

    def draws(self, count: int, seed: int, require_row: bool = True) -> List[KolmogorovParams]:
        """Sorteios racionais determinísticos que satisfazem H2 (e, se pedido, têm linha única)"""
        selected: List[KolmogorovParams] = []
        batch = 0
        while len(selected) < count and batch < 50:
            for params in self.classifier.random_candidates(max(4 * count, 100), seed + batch):
                if self._accepts(params, require_row):
                    selected.append(params)
                    if len(selected) == count:
                        break
            batch += 1
        return selected

    # -- baterias ---------------------------------------------------------

    def _run(self, name: str, params_list: List[KolmogorovParams],
             check: Callable[[KolmogorovParams], Optional[str]]) -> SuiteResult:
        def guarded(params: KolmogorovParams) -> Optional[str]:
            with logger.contextualize(params=params.label()):
                try:
                    return check(params)
                except CrossCheckMismatch as e:
                    return f"divergência: {e}"
                except PhasePortraitError as e:
                    return f"{type(e).__name__}: {e}"

        logger.info(f"Bateria {name}: {len(params_list)} sorteios")
        result = SuiteResult(name=name)
        for params, problem in zip(params_list, self._parallel(guarded, params_list, name)):
            if problem == "skip":
                result.skipped += 1
                continue
            result.checked += 1
            if problem is not None:
                result.failures.append({'params': params.as_dict(), 'problem': problem})
        status = "✅" if result.passed else "❌"
        click.echo(f"{status} {name}: {result.checked - len(result.failures)}/{result.checked} "
                   f"({result.skipped} ignorados)", err=True)
        return result

    def _check_oracle(self, params: KolmogorovParams) -> Optional[str]:
        report = self.classifier.classify(params)
        self.classifier.check_finite_types(report)
        return None

    def _check_poincare_hopf(self, params: KolmogorovParams) -> Optional[str]:
        normalized = self.classifier.classify(params).normalized
        ledger = numerical_index_ledger(normalized, self.config.winding_min_samples,
                                        self.config.winding_residue_gate)
        if not ledger.balanced:
            return f"balanço {ledger.total} != 2"
        return None

    def _check_darboux(self, params: KolmogorovParams) -> Optional[str]:
        try:
            certificate = darboux_certificate(params)
        except InvariantDegenerate:
            return "skip"
        if not certificate.is_valid:
            return f"resíduo {certificate.residual}"
        return None

    def _plane_orbit(self, params: KolmogorovParams, start: Tuple[float, float], forward: bool) -> np.ndarray:
        """Órbita no plano para t em [0, MIRROR_T_END], parametrizada por comprimento de arco"""
        solver = RKF45(tolerance=self.config.rtol, h_max=self.config.max_step_disc)
        field = normalized_field(build_system(params), forward=forward)
        result = solver.integrate(field, np.array(start, dtype=float), max_steps=self.config.max_steps,
                                  t_end=MIRROR_T_END)
        return np.array(result.points)

    def _check_symmetry(self, params: KolmogorovParams) -> Optional[str]:
        x, z = params_rng(params).uniform(-2.0, 2.0, size=2)
        original = self._plane_orbit(params, (x, z), forward=True)
        for op in SymmetryOp:
            image = self._plane_orbit(op.apply(params), op.map_point(x, z), forward=not op.reverses_time)
            mapped = np.array(op.map_point(*original[-1]))
            gap = float(np.max(np.abs(mapped - image[-1])))
            if gap > MIRROR_TOLERANCE:
                return f"{op.value}: distância {gap:.3e} em t={MIRROR_T_END}"
        if params.c1 == 0:
            flipped = self.classifier.classify(SymmetryOp.FLIP_X.apply(params)).g_label
            if flipped != self.classifier.classify(params).g_label:
                return "FlipX muda o rótulo G com c1 = 0"
        return None

    def _check_contact(self, params: KolmogorovParams) -> Optional[str]:
        if params.c1 == 0:
            return "skip"
        rng = params_rng(params)
        # z = 0 é invariante; os níveis ficam longe dele
        levels = rng.uniform(0.1, 3.0, size=CONTACT_SAMPLES) * rng.choice([-1.0, 1.0], size=CONTACT_SAMPLES)
        for z0 in levels:
            changes = contact_sign_changes(params, float(z0))
            if changes != 1:
                return f"z0={z0:.4f}: {changes} trocas de sinal"
        return None

    def _check_partition(self, params: KolmogorovParams) -> Optional[str]:
        tables = self.classifier.tables
        normalized, _ = normalize(params)
        env = ParamEnvironment(normalized)
        cases = [case for case, conditions, _ in tables.cases if all(c.holds(env) for c in conditions)]
        if len(cases) != 1:
            return f"{len(cases)} casos"
        rows = [row for row in tables.finite_rows.values() if row.case == cases[0] and row.matches(env)]
        if len(rows) != 1:
            return f"caso {cases[0]}: linhas {[row.row_id for row in rows]}"
        branches = [branch for branch in tables.global_rows.get(rows[0].row_id, []) if branch.matches(env)]
        if len(branches) != 1:
            return f"linha {rows[0].row_id}: {len(branches)} sublinhas globais"
        return None

    def _check_limit_cycle(self, params: KolmogorovParams) -> Optional[str]:
        """Órbita que volta ao ponto inicial indicaria ciclo limite"""
        normalized = self.classifier.classify(params).normalized
        rng = params_rng(params)
        x, z = rng.uniform(0.1, 3.0, size=2) * rng.choice([-1.0, 1.0], size=2)
        disc = disc_project((x, z))
        start = np.array([disc.x_disc, disc.y_disc])
        orbit = integrate_orbit(normalized, DiscPoint(*start), budget=4000, config=self.config)
        if orbit.termination is not Termination.STEP_LIMIT or len(orbit.points) < 50:
            return None
        steps = np.hypot(*np.diff(orbit.points, axis=0).T)
        travelled = np.cumsum(steps)
        far = travelled > 0.1
        if np.any(far):
            distances = np.hypot(*(orbit.points[1:][far] - start).T)
            if float(np.min(distances)) < 1e-6:
                return "órbita retorna ao ponto inicial"
        return None

    def check_captions(self) -> SuiteResult:
        """Reprodução [R,S] do conjunto designado"""
        result = SuiteResult(name='captions')
        for g_label, raw in self.classifier.tables.raw.designated_witnesses.items():
            params = KolmogorovParams.from_mapping(raw)
            try:
                with logger.contextualize(params=params.label()):
                    report = self.classifier.full_report(params, trace=True)
                problem = None
                if report.g_label != g_label:
                    problem = f"classificado como {report.g_label}"
                elif not report.caption_matches:
                    problem = f"[R={report.r_count}, S={report.s_count}] != legenda {list(report.caption)}"
            except PhasePortraitError as e:
                problem = f"{type(e).__name__}: {e}"
            result.checked += 1
            if problem:
                result.failures.append({'g_label': g_label, 'params': params.as_dict(), 'problem': problem})
                logger.warning(f"Legenda de {g_label} não reproduzida: {problem}")
        status = "✅" if result.passed else "❌"
        click.echo(f"{status} captions: {result.checked - len(result.failures)}/{result.checked}", err=True)
        return result

    def run_suites(self, names: List[str], draws: int, seed: int) -> List[SuiteResult]:
        checks = {
            'oracle': self._check_oracle,
            'poincare-hopf': self._check_poincare_hopf,
            'darboux': self._check_darboux,
            'symmetry': self._check_symmetry,
            'contact': self._check_contact,
            'partition': self._check_partition,
            'limit-cycles': self._check_limit_cycle,
        }
        needs_rows = any(n in checks and n != 'partition' for n in names)
        sample = self.draws(draws, seed) if needs_rows else []
        h2_sample = self.draws(draws, seed, require_row=False) if 'partition' in names else []
        results = []
        for name in names:
            if name == 'captions':
                results.append(self.check_captions())
            else:
                params_list = h2_sample if name == 'partition' else sample
                results.append(self._run(name, params_list, checks[name]))
        return results

    # -- varredura e tabelas ------------------------------------------------

    def sweep(self, grid: Dict[str, List[Any]]) -> pd.DataFrame:
        combos = [KolmogorovParams(*values) for values in itertools.product(*(grid[n] for n in PARAM_NAMES))]

        def classify_one(params: KolmogorovParams) -> Dict[str, Any]:
            row = {name: str(getattr(params, name)) for name in PARAM_NAMES}
            try:
                report = self.classifier.classify(params)
                row.update(subcase=report.case.subcase, mu_branch=report.case.mu_branch,
                           o1=report.o1_label, o2=report.o2_type.value, g_label=report.g_label,
                           errata=";".join(report.errata), error=None)
            except PhasePortraitError as e:
                row.update(subcase=None, mu_branch=None, o1=None, o2=None, g_label=None,
                           errata=None, error=f"{type(e).__name__}: {e}")
            return row

        return pd.DataFrame(self._parallel(classify_one, combos, 'sweep'))

    def _o2_errata(self) -> List[str]:
        return [entry['id'] for entry in self.classifier.errata.get('o2_types', [])]

    def _branch_accepts_o2(self, params: KolmogorovParams, branch: GlobalRow, o2: str) -> bool:
        if branch.o2_printed == o2:
            return True
        errata = self._o2_errata()
        return any(flag in errata for flag in self.classifier.errata_flags(params, branch))

    def generic_labels(self, params: KolmogorovParams) -> Dict[str, Any]:
        """
        Tipos finitos e rótulos de O1, O2 e G só pelo pipeline genérico

        G é procurado entre as sublinhas cujos tipos finitos, rótulo de O1 e
        tipo de O2 (ou erratum de O2) coincidem com os calculados; as
        condições das linhas não entram.

        Returns:
            {'types', 'o1' (None sem assinatura conhecida), 'o2', 'g' (lista ordenada)}
        """
        tables = self.classifier.tables
        points = classify_finite_generic(params, max_order=self.config.center_manifold_max_order)
        types = {point.key: point.local_type.abbreviation for point in points}
        o1 = o1_label_from_blowup(params, tables, self.config.blowup_max_depth)
        o2 = o2_classify(params).abbreviation
        g_labels = sorted({
            branch.g_label
            for finite_row in tables.finite_rows.values() if finite_row.types == types
            for branch in tables.global_rows.get(finite_row.row_id, [])
            if branch.o1 == o1 and self._branch_accepts_o2(params, branch, o2)
        })
        return {'types': types, 'o1': o1, 'o2': o2, 'g': g_labels}

    def reproduce_tables(self, only: Optional[str] = None) -> pd.DataFrame:
        witnesses = dict(self.classifier.enumerate_representatives(strict=False))
        rows = []
        for row in self.classifier.tables.all_global_rows():
            if only and row.row_id != only:
                continue
            finite_row = self.classifier.tables.finite_rows[row.row_id]
            conditions = [str(c) for c in finite_row.conditions] + [str(c) for c in row.when]
            expected = f"{row.o1}/{row.o2_printed}/{row.g_label}"
            entry = {'subcase': row.key, 'conditions': "; ".join(conditions), 'expected': expected,
                     'caption': self.classifier.tables.caption(row.g_label)}
            params = witnesses.get(row.key)
            if params is None:
                entry.update(witness=None, computed=None, status='NO_WITNESS')
                rows.append(entry)
                continue
            try:
                report = self.classifier.classify(params)
                generic = self.generic_labels(report.normalized)
            except PhasePortraitError as e:
                entry.update(witness=params.label(), computed=None, status=f"FAIL ({type(e).__name__}: {e})")
                rows.append(entry)
                continue
            computed = f"{generic['o1'] or '?'}/{generic['o2']}/{'|'.join(generic['g']) or '?'}"
            o2_erratum = any(flag in self._o2_errata() for flag in report.errata)
            checks = (
                report.case.subcase == row.row_id,
                generic['types'] == finite_row.types,
                generic['o1'] == row.o1,
                generic['o2'] == row.o2_printed or o2_erratum,
                row.g_label in generic['g'],
            )
            status = 'PASS' if all(checks) else 'FAIL'
            if report.errata:
                status = f"{status} (ERRATUM: {', '.join(report.errata)})"
            entry.update(witness=params.label(), computed=computed, status=status)
            rows.append(entry)
        columns = ['subcase', 'conditions', 'witness', 'computed', 'expected', 'status', 'caption']
        return pd.DataFrame(rows, columns=columns)


@click.group()
@click.option('--debug', is_flag=True, help='Ativar modo debug')
@click.option('--log-level', default=lambda: os.getenv('PHASEPORT_LOG_LEVEL', 'WARNING'),
              help='Nível de log (DEBUG, INFO, WARNING, ERROR)')
@click.option('--config', 'config_path', help='Arquivo YAML de configuração da análise')
@click.pass_context
def cli(ctx, debug, log_level, config_path):
    """Retratos de fase da família de Kolmogorov no disco de Poincaré"""

    # Configurar logging
    setup_logging(log_level, debug)

    # Carregar configuração
    ctx.ensure_object(dict)
    try:
        config = AnalysisConfig.from_yaml(config_path) if config_path else AnalysisConfig.from_env()
    except Exception as e:
        click.echo(f"❌ Erro: {e}", err=True)
        sys.exit(EXIT_FAILURE)
    ctx.obj['config'] = config


@cli.command()
@param_options
@click.option('--trace/--no-trace', default=False, help='Traçar separatrizes e contar S/R')
@click.option('--output', help='Arquivo JSON de saída (stdout por padrão)')
@click.option('--pretty', is_flag=True, help='Resumo legível em vez de JSON')
@click.option('--separatrices', is_flag=True, help='Incluir a configuração de separatrizes no JSON')
@click.pass_context
def analyze(ctx, trace, output, pretty, separatrices, **options):
    """Relatório completo com conferências cruzadas"""

    try:
        params = params_from_options(options)
        classifier = PhasePortraitClassifier(config=ctx.obj['config'])
        report = classifier.full_report(params, trace=trace)
        if pretty:
            click.echo(classifier.generate_summary_report())
        else:
            emit_json(report.to_dict(include_separatrices=separatrices), output)
    except click.UsageError:
        raise
    except Exception as e:
        exit_with_error(e)


@cli.command()
@param_options
@click.option('--pretty', is_flag=True, help='Resumo legível em vez de JSON')
@click.pass_context
def classify(ctx, pretty, **options):
    """Classificação pelas tabelas (sem traçado)"""

    try:
        params = params_from_options(options)
        classifier = PhasePortraitClassifier(config=ctx.obj['config'])
        report = classifier.classify(params)
        if pretty:
            click.echo(classifier.generate_summary_report())
        else:
            emit_json(report.to_dict())
    except click.UsageError:
        raise
    except Exception as e:
        exit_with_error(e)


@cli.command()
@param_options
@click.option('--output', required=True, help='Arquivo SVG de saída')
@click.option('--size', default=600, help='Lado da imagem em pixels')
@click.option('--labels/--no-labels', default=True, help='Rótulos dos pontos e legenda')
@click.option('--samples/--no-samples', default=True, help='Órbita de amostra em cada região')
@click.pass_context
def render(ctx, output, size, labels, samples, **options):
    """Desenha o retrato de fase em SVG"""

    try:
        params = params_from_options(options)
        config = ctx.obj['config']
        classifier = PhasePortraitClassifier(config=config)
        report = classifier.full_report(params, trace=True)
        render_options = RenderOptions(size=size, labels=labels, sample_orbits=samples,
                                       g_label=report.g_label, subcase=str(report.case))
        svg = render_svg(report.normalized, report.configuration, render_options, config)
        atomic_write(output, svg)
        click.echo(f"✅ {report.g_label} [R={report.r_count}, S={report.s_count}] salvo em {output}")
    except click.UsageError:
        raise
    except Exception as e:
        exit_with_error(e)


@cli.command()
@click.option('--suite', 'suites', multiple=True, type=click.Choice(SUITES + ('all',)), default=('all',),
              help='Bateria a executar (repetível)')
@click.option('--draws', default=100, help='Sorteios por bateria')
@click.option('--seed', default=None, type=int, help='Semente (a da configuração por padrão)')
@click.option('--output', help='Arquivo JSON com o resumo')
@click.pass_context
def verify(ctx, suites, draws, seed, output):
    """Executa as baterias de propriedades"""

    try:
        config = ctx.obj['config']
        names = list(SUITES) if 'all' in suites else list(dict.fromkeys(suites))
        analyzer = PortraitAnalyzer(config)
        results = analyzer.run_suites(names, draws, config.seed if seed is None else seed)
        emit_json({'suites': [r.to_dict() for r in results],
                   'passed': all(r.passed for r in results)}, output)
        if not all(r.passed for r in results):
            sys.exit(EXIT_FAILURE)
        click.echo("🎉 Todas as baterias passaram", err=True)
    except Exception as e:
        exit_with_error(e)


@cli.command()
@click.option('--a0', 'a0_list', required=True, callback=parse_rational_list, help='Valores de a0 separados por vírgula')
@click.option('--c0', 'c0_list', required=True, callback=parse_rational_list, help='Valores de c0')
@click.option('--c1', 'c1_list', required=True, callback=parse_rational_list, help='Valores de c1')
@click.option('--c2', 'c2_list', required=True, callback=parse_rational_list, help='Valores de c2')
@click.option('--c3', 'c3_list', required=True, callback=parse_rational_list, help='Valores de c3')
@click.option('--mu', 'mu_list', required=True, callback=parse_rational_list, help='Valores de mu')
@click.option('--format', 'fmt', type=click.Choice(['csv', 'json']), default='csv', help='Formato de saída')
@click.option('--output', help='Arquivo de saída (stdout por padrão)')
@click.pass_context
def sweep(ctx, a0_list, c0_list, c1_list, c2_list, c3_list, mu_list, fmt, output):
    """Classifica uma grade de parâmetros"""

    try:
        grid = dict(zip(PARAM_NAMES, (a0_list, c0_list, c1_list, c2_list, c3_list, mu_list)))
        df = PortraitAnalyzer(ctx.obj['config']).sweep(grid)
        text = df.to_csv(index=False) if fmt == 'csv' else df.to_json(orient='records', indent=2, force_ascii=False)
        if output:
            atomic_write(output, text)
            click.echo(f"📊 {len(df)} pontos classificados, salvos em {output}", err=True)
        else:
            click.echo(text)
    except Exception as e:
        exit_with_error(e)


@cli.command()
@click.option('--only', help='Reproduzir apenas esta linha (ex.: 1.9)')
@click.option('--format', 'fmt', type=click.Choice(['csv', 'json']), default='json', help='Formato de saída')
@click.option('--output', help='Arquivo de saída (stdout por padrão)')
@click.pass_context
def tables(ctx, only, fmt, output):
    """Reproduz as tabelas de classificação com uma testemunha por linha"""

    try:
        df = PortraitAnalyzer(ctx.obj['config']).reproduce_tables(only)
        if df.empty:
            click.echo(f"📭 Nenhuma linha corresponde a {only}", err=True)
            sys.exit(EXIT_FAILURE)
        text = df.to_csv(index=False) if fmt == 'csv' else df.to_json(orient='records', indent=2, force_ascii=False)
        if output:
            atomic_write(output, text)
        else:
            click.echo(text)

        failed = df[df['status'].str.startswith(('FAIL', 'NO_WITNESS')) & ~df['status'].str.contains('ERRATUM')]
        passed = int(df['status'].str.startswith('PASS').sum())
        click.echo(f"📋 {passed}/{len(df)} linhas PASS, {len(failed)} falhas fora da errata", err=True)
        if not failed.empty:
            sys.exit(EXIT_FAILURE)
    except Exception as e:
        exit_with_error(e)


if __name__ == '__main__':
    cli()
