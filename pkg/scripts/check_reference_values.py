#!/usr/bin/env python3
"""
Script para comparar los valores de referencia con los calculados

Uso:
    python scripts/check_reference_values.py [--examples 100000] [--seed 2024]
"""

import sys
from pathlib import Path

import click

# Agregar directorio raiz al path
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.main import LabelingOrchestrator
from src.models.labeling import VoteTally
from src.services.campaign_service import run_campaign, summarize
from src.services.oracle_service import UniformNoiseOracle
from src.services.poker_service import exact_showdown_equity, parse_cards
from src.services.policy_service import ChiSquarePolicy
from src.services.stats_service import chi_square_p_value


# (w, media de referencia, std de referencia, tolerancia de la media)
CHI_POLICY_REFERENCE = [
    (0.2, 2.99, 1.55, 0.05),
    (0.4, 4.93, 3.49, 0.05),
    (0.6, 10.59, 9.2, 0.05),
    (0.8, 58.30, 64.36, 0.10),
]
STD_TOLERANCE = 0.25


def report(name, reference, computed, ok):
    status = "OK" if ok else "DIFERENCIA"
    print(f"  {name}: referencia={reference:.6g} calculado={computed:.6g} [{status}]")
    return ok


def check_chi_square():
    """p-valores de los dos conteos de ejemplo"""
    print("\n[Chi-cuadrado]")
    results = []
    for counts, reference in [
        ((0, 0, 7, 0, 1, 0, 2, 0, 0, 0), 1.411e-6),
        ((0, 0, 5, 0, 0, 0, 0, 0, 5, 0), 7.599e-6),
    ]:
        computed = chi_square_p_value(VoteTally(counts))
        ok = abs(computed - reference) / reference < 1e-3
        results.append(report(" ".join(map(str, counts)), reference, computed, ok))
    return all(results)


def check_poker():
    """Equity de Qh Js vs 7s 7d con flop 2s 9s Ts"""
    print("\n[Poker]")
    equity = exact_showdown_equity(parse_cards("Qh Js"), parse_cards("7s 7d"), parse_cards("2s 9s Ts"))
    print(f"  rivers: P1={equity.wins1} P2={equity.wins2} empates={equity.ties}")
    return report("P1 share", 0.6697, equity.share1, abs(equity.share1 - 0.6697) <= 0.0005)


def check_chi_policy(examples, seed):
    """Media y desviacion de validaciones de la politica chi-cuadrado"""
    print(f"\n[Politica chi-cuadrado, {examples} ejemplos por nivel de ruido]")
    results = []
    for w, mean_ref, std_ref, tolerance in CHI_POLICY_REFERENCE:
        oracle = UniformNoiseOracle(10, w)
        stream = LabelingOrchestrator.example_stream(oracle, examples)
        summary = summarize(run_campaign(oracle, ChiSquarePolicy(0.05), examples * 10_000, stream, seed))
        results.append(report(
            f"w={w} media",
            mean_ref,
            summary.mean_validations,
            abs(summary.mean_validations - mean_ref) <= tolerance * mean_ref
        ))
        results.append(report(
            f"w={w} std",
            std_ref,
            summary.std_validations,
            abs(summary.std_validations - std_ref) <= STD_TOLERANCE * std_ref
        ))
    return all(results)


@click.command()
@click.option('--examples', type=click.IntRange(min=1), default=100_000, show_default=True)
@click.option('--seed', type=click.IntRange(min=0), default=2024, show_default=True)
def main(examples, seed):
    """Ejecutar todas las verificaciones"""
    print("\n" + "=" * 50)
    print("VERIFICACION DE VALORES DE REFERENCIA")
    print("=" * 50)

    results = {
        'Chi-cuadrado': check_chi_square(),
        'Poker': check_poker(),
        'Politica chi-cuadrado': check_chi_policy(examples, seed),
    }

    print("\n" + "=" * 50)
    print("RESUMEN")
    print("=" * 50)
    for name, ok in results.items():
        print(f"  {name}: {'OK' if ok else 'DIFERENCIA'}")

    sys.exit(0 if all(results.values()) else 1)


if __name__ == '__main__':
    main()
