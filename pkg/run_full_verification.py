#!/usr/bin/env python3
"""
Script unificado de verificação dos retratos de fase
Reproduz as tabelas, executa as baterias de propriedades e desenha as testemunhas designadas
"""

import sys
import subprocess
from datetime import datetime
from pathlib import Path

import yaml

MAIN = str(Path(__file__).parent / 'src' / 'main.py')
OUTPUT_DIR = Path('output')

PHASES = [
    ("📋 FASE 1: REPRODUÇÃO DAS TABELAS", ['tables', '--format', 'csv', '--output', 'output/tables.csv']),
    ("🔬 FASE 2: BATERIAS DE PROPRIEDADES", ['verify', '--output', 'output/verify.json']),
]

TABLES = Path(__file__).parent / 'config' / 'classification_tables.yaml'


def designated_witnesses() -> dict:
    with open(TABLES, 'r', encoding='utf-8') as f:
        witnesses = yaml.safe_load(f)['designated_witnesses']
    return {g_label: [f'--{name}={value}' for name, value in raw.items()]
            for g_label, raw in witnesses.items()}


def run_cli(args, draws: int = None) -> int:
    command = [sys.executable, MAIN] + args
    if draws is not None and args[0] == 'verify':
        command += ['--draws', str(draws)]
    return subprocess.run(command, capture_output=False, text=True).returncode


def run_full_verification(draws: int = None) -> bool:
    """Executa todas as fases e desenha o conjunto designado"""

    print("🎯 VERIFICAÇÃO COMPLETA DOS RETRATOS DE FASE")
    print("=" * 80)
    print(f"🕐 Início: {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}")
    if draws:
        print(f"🔢 SORTEIOS: {draws} por bateria")
    OUTPUT_DIR.mkdir(parents=True, exist_ok=True)

    ok = True
    for title, args in PHASES:
        print("\n" + "=" * 80)
        print(title)
        print("=" * 80)
        try:
            if run_cli(args, draws) == 0:
                print("✅ Fase concluída com sucesso")
            else:
                print("❌ Fase terminou com falhas")
                ok = False
        except Exception as e:
            print(f"❌ Erro ao executar a fase: {e}")
            ok = False

    print("\n" + "=" * 80)
    print("🖼️  FASE 3: RETRATOS DAS TESTEMUNHAS DESIGNADAS")
    print("=" * 80)
    for g_label, params in designated_witnesses().items():
        try:
            code = run_cli(['render', '--output', f'output/{g_label}.svg'] + params)
            if code != 0:
                print(f"❌ {g_label}: código de saída {code}")
                ok = False
        except Exception as e:
            print(f"⚠️  Erro ao desenhar {g_label}: {e}")
            ok = False

    print(f"\n{'🎉 VERIFICAÇÃO CONCLUÍDA!' if ok else '❌ VERIFICAÇÃO COM FALHAS'}")
    print(f"🕐 Fim: {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}")
    print(f"📁 Resultados em {OUTPUT_DIR}/")
    return ok


def show_help():
    """Mostra ajuda de uso"""
    print("""
🎯 VERIFICAÇÃO COMPLETA DOS RETRATOS DE FASE

USAGE:
    python run_full_verification.py [sorteios]

PARÂMETROS:
    sorteios (opcional): sorteios por bateria (padrão: o do comando verify)

FUNÇÕES:
    - Reproduz as tabelas de classificação com uma testemunha por sublinha
    - Executa as baterias oracle, poincare-hopf, darboux, symmetry, contact,
      partition, captions e limit-cycles
    - Desenha em SVG os retratos das testemunhas designadas
""")


if __name__ == "__main__":
    if len(sys.argv) > 1:
        if sys.argv[1] in ['-h', '--help', 'help']:
            show_help()
        else:
            try:
                draws = int(sys.argv[1])
            except ValueError:
                print("❌ Sorteios deve ser um número inteiro")
                print("Use: python run_full_verification.py --help")
                sys.exit(1)
            sys.exit(0 if run_full_verification(draws) else 1)
    else:
        sys.exit(0 if run_full_verification() else 1)
