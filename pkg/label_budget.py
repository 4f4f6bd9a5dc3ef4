#!/usr/bin/env python3
"""
Label Budget - CLI Principal

Simula campanas de etiquetado con un oracle ruidoso bajo un presupuesto de
consultas: curvas de probabilidad del voto mayoritario, politicas de
validacion (fija, por etapas, chi-cuadrado), equity de poker y re-etiquetado
de MNIST.

Uso:
    python label_budget.py COMANDO [opciones]

Ejemplos:
    python label_budget.py chi 0 0 7 0 1 0 2 0 0 0
    python label_budget.py poker equity Qh Js -- 7s 7d -- 2s 9s Ts
    python label_budget.py simulate --config run.json --threads 8
    python label_budget.py curves --noise 0.2,0.4 --validations 1..25 --seed 7 --out curves.csv
"""

import sys
from pathlib import Path
from typing import List, Optional, Sequence

import click
from rich.console import Console
from rich.markup import escape
from rich.panel import Panel
from rich.table import Table

# Agregar src al path
sys.path.insert(0, str(Path(__file__).parent))

from src.config.settings import settings
from src.main import LabelingOrchestrator
from src.models.labeling import VoteTally
from src.models.poker import ShowdownOutcome
from src.models.results import CampaignSummary
from src.models.run_config import RunConfig
from src.services.poker_service import exact_showdown_equity, parse_cards, sample_showdown
from src.services.stats_service import STANDARD_V_GRID, chi_square_p_value, chi_square_statistic
from src.utils.exceptions import CardError, ConfigError, LabelingError, PolicySpecError
from src.utils.logger import set_verbosity
from src.utils.random_streams import derive_stream


EXIT_OK = 0
EXIT_USAGE = 1
EXIT_RUNTIME = 2

DEFAULT_NOISE_LEVELS = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8"

console = Console()
err_console = Console(stderr=True)


def print_header(title: str):
    """Mostrar header del comando"""
    console.print(Panel.fit(
        f"[bold cyan]Label Budget[/bold cyan]\n[dim]{escape(title)}[/dim]",
        border_style="cyan"
    ))


def print_summary(summary: CampaignSummary, files: Sequence[Path]):
    """Mostrar resumen de la campana en tabla"""
    table = Table(title="Resumen de campana", show_header=True)
    table.add_column("Metrica", style="cyan")
    table.add_column("Valor", style="bold", justify="right")

    def fmt(value: Optional[float]) -> str:
        return "-" if value is None else f"{value:.4f}"

    table.add_row("Etiquetados", str(summary.labeled))
    table.add_row("Consultas", f"{summary.total_queries} / {summary.s_max}")
    table.add_row("Precision", fmt(summary.label_accuracy))
    table.add_row("Validaciones (media)", fmt(summary.mean_validations))
    table.add_row("Validaciones (std)", fmt(summary.std_validations))
    table.add_row("Validaciones (max)", str(summary.max_validations))
    table.add_row("Sin pico claro", str(summary.peaked))
    for reason, count in summary.finalize_reasons.items():
        table.add_row(f"Finalizados por {reason}", str(count))
    console.print(table)

    for path in files:
        console.print(f"[dim]Escrito:[/dim] {escape(str(path))}")


# ---------------------------------------------------------------------------
# Parseo de listas
# ---------------------------------------------------------------------------

def parse_float_list(text: str, name: str) -> List[float]:
    try:
        values = [float(item) for item in text.split(",") if item.strip()]
    except ValueError:
        raise click.BadParameter(f"lista de numeros invalida: {text!r}", param_hint=name) from None
    if not values:
        raise click.BadParameter("la lista esta vacia", param_hint=name)
    return values


def parse_int_list(text: str, name: str) -> List[int]:
    """Enteros separados por comas; 'a..b' expande el rango inclusive"""
    values: List[int] = []
    try:
        for item in (part.strip() for part in text.split(",")):
            if not item:
                continue
            if ".." in item:
                start, end = item.split("..", 1)
                values.extend(range(int(start), int(end) + 1))
            else:
                values.append(int(item))
    except ValueError:
        raise click.BadParameter(f"lista de enteros invalida: {text!r}", param_hint=name) from None
    if not values:
        raise click.BadParameter("la lista esta vacia", param_hint=name)
    return values


def split_matchup(tokens: Sequence[str]):
    """'Qh Js -- 7s 7d -- 2s 9s Ts' -> (p1, p2, flop)"""
    cards_text = [token for token in tokens if token != "--"]
    if len(cards_text) != 7:
        raise click.UsageError(
            f"Se esperan 7 cartas (p1: 2, p2: 2, flop: 3), llegaron {len(cards_text)}"
        )
    try:
        cards = parse_cards(" ".join(cards_text))
    except CardError as e:
        raise click.BadParameter(str(e), param_hint="CARDS") from None
    return cards[0:2], cards[2:4], cards[4:7]


# ---------------------------------------------------------------------------
# Comandos
# ---------------------------------------------------------------------------

@click.group()
@click.option(
    '--threads', type=click.IntRange(min=1), default=None,
    help='Workers para las campanas (no cambia los resultados)'
)
@click.option(
    '--verbose', '-v', is_flag=True,
    help='Mostrar logs detallados'
)
@click.pass_context
def cli(ctx, threads, verbose):
    """Simulacion de etiquetado con oracle ruidoso y presupuesto de consultas."""
    set_verbosity(verbose)
    ctx.obj = {"threads": threads, "verbose": verbose}


@cli.command()
@click.option('--classes', '-l', type=click.IntRange(min=2), default=10, show_default=True, help='Numero de clases l')
@click.option('--noise', default=DEFAULT_NOISE_LEVELS, show_default=True, help='Niveles de ruido w separados por comas')
@click.option('--validations', default="1..100", show_default=True, help="Valores de v ('1,3,5' o '1..100')")
@click.option('--trials', type=click.IntRange(min=1), default=100_000, show_default=True, help='Simulaciones Monte Carlo por celda')
@click.option('--seed', type=click.IntRange(min=0), required=True, help='Semilla maestra')
@click.option('--out', 'out_path', type=click.Path(dir_okay=False), required=True, help='CSV de salida')
@click.pass_obj
def curves(obj, classes, noise, validations, trials, seed, out_path):
    """Probabilidad de etiqueta correcta vs numero de validaciones."""
    noise_levels = parse_float_list(noise, "--noise")
    grid = parse_int_list(validations, "--validations")

    rows = LabelingOrchestrator(threads=obj["threads"]).curves(classes, noise_levels, grid, trials, seed, out_path)
    console.print(f"[green]{len(rows)} filas escritas en[/green] {escape(out_path)}")


@cli.command()
@click.option('--config', 'config_path', type=click.Path(dir_okay=False), default=None, help='Archivo JSON de configuracion')
@click.option('--classes', '-l', type=int, default=None, help='Oracle uniforme: numero de clases')
@click.option('--noise', type=float, default=None, help='Oracle uniforme: nivel de ruido w')
@click.option('--policy', default=None, help="Politica, p. ej. 'fixed:v=5' o 'chi:threshold=0.05;cap=0'")
@click.option('--s-max', 's_max', type=int, default=None, help='Presupuesto de consultas')
@click.option('--examples', type=int, default=None, help='Cantidad de ejemplos del stream')
@click.option('--seed', type=int, default=None, help='Semilla maestra (requerida aqui o en el archivo)')
@click.option('--out-dir', default=None, help='Directorio de salida')
@click.pass_obj
def simulate(obj, config_path, classes, noise, policy, s_max, examples, seed, out_dir):
    """Correr una campana y escribir examples.csv y summary.txt."""
    overrides = {
        "policy": policy,
        "s_max": s_max,
        "examples": examples,
        "seed": seed,
        "out_dir": out_dir,
        "threads": obj["threads"],
    }
    data = {}
    if config_path is not None:
        data = RunConfig.read_file(config_path)
    if classes is not None or noise is not None:
        oracle = dict(data.get("oracle") or {})
        if oracle.get("kind") != "uniform":
            oracle = {"kind": "uniform"}
        if classes is not None:
            oracle["l"] = classes
        if noise is not None:
            oracle["w"] = noise
        overrides["oracle"] = oracle

    config = RunConfig.from_mapping(data, overrides)
    output = LabelingOrchestrator(threads=config.threads).simulate(config)

    print_header(f"simulate | {config.policy} | s_max={config.s_max}")
    print_summary(output.summary, [output.examples_path, output.summary_path])


@cli.group()
def poker():
    """Equity de showdown de Texas Hold'em."""


@poker.command('equity')
@click.argument('cards', nargs=-1, required=True)
def poker_equity(cards):
    """Equity exacta sobre los 990 rivers: P1 -- P2 -- FLOP."""
    p1, p2, flop = split_matchup(cards)
    equity = exact_showdown_equity(p1, p2, flop)

    table = Table(title="Equity exacta", show_header=True)
    table.add_column("Resultado", style="cyan")
    table.add_column("Rivers", justify="right")
    table.add_column("Probabilidad", style="bold", justify="right")
    table.add_row("P1 gana", str(equity.wins1), f"{equity.win1:.4f}")
    table.add_row("P2 gana", str(equity.wins2), f"{equity.win2:.4f}")
    table.add_row("Empate", str(equity.ties), f"{equity.tie:.4f}")
    console.print(table)
    console.print(f"P1 share={equity.share1:.4f} P2 share={equity.share2:.4f}")


@poker.command('sample')
@click.option('--n', 'samples', type=click.IntRange(min=1), default=10_000, show_default=True, help='Rivers a muestrear')
@click.option('--seed', type=click.IntRange(min=0), required=True, help='Semilla maestra')
@click.argument('cards', nargs=-1, required=True)
def poker_sample(samples, seed, cards):
    """Frecuencias de showdown con rivers muestreados: P1 -- P2 -- FLOP."""
    p1, p2, flop = split_matchup(cards)
    equity = exact_showdown_equity(p1, p2, flop)

    rng = derive_stream(seed, 0)
    counts = {outcome: 0 for outcome in ShowdownOutcome}
    for _ in range(samples):
        counts[sample_showdown(p1, p2, flop, rng)] += 1

    table = Table(title=f"Showdowns muestreados (n={samples})", show_header=True)
    table.add_column("Resultado", style="cyan")
    table.add_column("Frecuencia", style="bold", justify="right")
    table.add_column("Exacta", justify="right")
    exact = {
        ShowdownOutcome.P1_WINS: equity.win1,
        ShowdownOutcome.P2_WINS: equity.win2,
        ShowdownOutcome.TIE: equity.tie,
    }
    for outcome in ShowdownOutcome:
        table.add_row(outcome.value, f"{counts[outcome] / samples:.4f}", f"{exact[outcome]:.4f}")
    console.print(table)


@cli.command()
@click.argument('counts', nargs=-1, required=True, type=click.IntRange(min=0))
def chi(counts):
    """p-valor chi-cuadrado de un conteo contra la distribucion uniforme."""
    if len(counts) < 2:
        raise click.UsageError("Se necesitan conteos para al menos 2 clases")
    if sum(counts) == 0:
        raise click.UsageError("El conteo no tiene consultas")
    tally = VoteTally(counts)
    statistic = chi_square_statistic(tally)
    p_value = chi_square_p_value(tally)

    table = Table(title="Chi-cuadrado contra la uniforme", show_header=True)
    table.add_column("X2", justify="right")
    table.add_column("gl", justify="right")
    table.add_column("p-valor", style="bold", justify="right")
    table.add_row(f"{statistic:.4f}", str(tally.classes - 1), f"{p_value:.4g}")
    console.print(table)


@cli.command('mnist-relabel')
@click.option('--labels', 'labels_path', type=click.Path(exists=True, dir_okay=False), required=True, help='IDX de etiquetas')
@click.option('--images', 'images_path', type=click.Path(exists=True, dir_okay=False), default=None, help='IDX de imagenes (opcional, se valida el conteo)')
@click.option('--noise', type=float, required=True, help='Nivel de ruido w del oracle')
@click.option('--policy', required=True, help="Politica, p. ej. 'fixed:v=5'")
@click.option('--s-max', 's_max', type=int, required=True, help='Presupuesto de consultas')
@click.option('--seed', type=click.IntRange(min=0), required=True, help='Semilla maestra')
@click.option('--out-dir', default=lambda: settings.output_dir, help='Directorio de salida')
@click.pass_obj
def mnist_relabel(obj, labels_path, images_path, noise, policy, s_max, seed, out_dir):
    """Re-etiquetar MNIST con un oracle ruidoso y escribir IDX + procedencia."""
    output = LabelingOrchestrator(threads=obj["threads"]).relabel_mnist(
        labels_path, noise, policy, s_max, seed, out_dir, images_path=images_path
    )
    print_header(f"mnist-relabel | w={noise} | {policy}")
    print_summary(output.summary, [output.labels_path, output.provenance_path, output.summary_path])


@cli.command()
@click.option('--classes', '-l', type=click.IntRange(min=2), default=10, show_default=True, help='Numero de clases l')
@click.option('--noise', type=float, required=True, help='Nivel de ruido w')
@click.option('--s-max', 's_max', type=click.IntRange(min=1), required=True, help='Presupuesto de consultas')
@click.option('--validations', default=None, help='Valores de v (default: grilla estandar)')
@click.option('--out', 'out_path', type=click.Path(dir_okay=False), default=None, help='CSV de salida (opcional)')
@click.pass_obj
def tradeoff(obj, classes, noise, s_max, validations, out_path):
    """Cantidad vs calidad de etiquetas para cada v fijo."""
    grid = parse_int_list(validations, "--validations") if validations else list(STANDARD_V_GRID)
    rows = LabelingOrchestrator(threads=obj["threads"]).tradeoff(classes, noise, s_max, grid, out_path)

    table = Table(title=f"Cantidad vs calidad (l={classes}, w={noise}, s_max={s_max})", show_header=True)
    table.add_column("v", justify="right", style="cyan")
    table.add_column("Ejemplos", justify="right")
    table.add_column("Precision", justify="right", style="bold")
    table.add_column("Correctos", justify="right")
    table.add_column("Incorrectos", justify="right")
    for row in rows:
        table.add_row(
            str(row.v),
            str(row.examples),
            f"{row.label_accuracy:.4f}",
            f"{row.expected_correct:.1f}",
            f"{row.expected_incorrect:.1f}"
        )
    console.print(table)
    if out_path:
        console.print(f"[dim]Escrito:[/dim] {escape(out_path)}")


# ---------------------------------------------------------------------------
# Punto de entrada
# ---------------------------------------------------------------------------

def report_error(error: Exception, verbose: bool) -> None:
    if isinstance(error, ConfigError):
        err_console.print("[bold red]Configuracion invalida:[/bold red]")
        for location, message in error.issues:
            err_console.print(f"  {escape(location)}: {escape(message)}")
    else:
        err_console.print(f"[bold red]Error: {escape(str(error))}[/bold red]")
    if verbose:
        err_console.print_exception()


def run(argv: Optional[Sequence[str]] = None) -> int:
    """
    Ejecutar el CLI y devolver el codigo de salida.

    Returns:
        0 exito, 1 error de uso o configuracion, 2 error en la ejecucion
    """
    args = list(argv) if argv is not None else sys.argv[1:]
    verbose = "--verbose" in args or "-v" in args
    try:
        result = cli.main(args=args, prog_name="label_budget", standalone_mode=False)
    except click.ClickException as e:
        e.show()
        return EXIT_USAGE
    except click.Abort:
        err_console.print("\n[yellow]Operacion cancelada por el usuario[/yellow]")
        return EXIT_USAGE
    except (ConfigError, PolicySpecError) as e:
        report_error(e, verbose)
        return EXIT_USAGE
    except LabelingError as e:
        report_error(e, verbose)
        return EXIT_RUNTIME
    except Exception as e:
        report_error(e, verbose)
        return EXIT_RUNTIME
    # --help devuelve el codigo de click.exceptions.Exit
    return result if isinstance(result, int) else EXIT_OK


def main():
    sys.exit(run())


if __name__ == '__main__':
    main()
