"""Escritura de resultados: CSV por ejemplo, resumen clave=valor, curvas y tradeoff"""

import csv
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Union

from src.models.results import CampaignResult, CampaignSummary, CurveRow, TradeoffRow
from src.utils.logger import get_logger


PathLike = Union[str, Path]

EXAMPLES_HEADER = ["example_id", "assigned_label", "true_label", "queries_used", "correct", "finalize_reason", "peaked"]
CURVES_HEADER = ["l", "w", "v", "strict_prob", "tie_resolved_prob", "mc_mean", "mc_stderr"]
TRADEOFF_HEADER = [
    "l", "w", "v", "examples", "label_accuracy",
    "expected_correct", "expected_incorrect", "unpooled_correct", "unpooled_incorrect"
]

logger = get_logger("result_writer")


def format_float(value: Optional[float]) -> str:
    """repr de Python: la representacion mas corta que vuelve al mismo double"""
    if value is None:
        return "NA"
    return repr(float(value))


def format_bool(value: bool) -> str:
    return "true" if value else "false"


def _write_rows(path: PathLike, header: Sequence[str], rows: Iterable[Sequence[str]]) -> Path:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    with open(target, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        count = 0
        for row in rows:
            writer.writerow(row)
            count += 1
    logger.info("Archivo escrito", path=str(target), rows=count)
    return target


def write_examples_csv(path: PathLike, result: CampaignResult) -> Path:
    """CSV por ejemplo, ordenado por example_id"""
    rows = (
        [
            str(e.example_id),
            str(e.assigned_label),
            str(e.true_label),
            str(e.queries_used),
            format_bool(e.correct),
            e.finalize_reason.value,
            format_bool(e.peaked),
        ]
        for e in sorted(result.labeled, key=lambda e: e.example_id)
    )
    return _write_rows(path, EXAMPLES_HEADER, rows)


def summary_lines(summary: CampaignSummary) -> List[str]:
    """
    Resumen en formato clave=valor, una clave por linea y en orden fijo.

    Los valores ausentes (precision sin ejemplos) se escriben como NA.
    """
    lines = [
        f"labeled={summary.labeled}",
        f"total_queries={summary.total_queries}",
        f"s_max={summary.s_max}",
        f"label_accuracy={format_float(summary.label_accuracy)}",
        f"mean_validations={format_float(summary.mean_validations)}",
        f"std_validations={format_float(summary.std_validations)}",
        f"max_validations={summary.max_validations}",
        f"peaked={summary.peaked}",
    ]
    for reason, count in summary.finalize_reasons.items():
        lines.append(f"finalize_reason.{reason}={count}")
    return lines


def write_summary(path: PathLike, summary: CampaignSummary) -> Path:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text("\n".join(summary_lines(summary)) + "\n", encoding="utf-8")
    logger.info("Resumen escrito", path=str(target))
    return target


def write_curves_csv(path: PathLike, rows: Sequence[CurveRow]) -> Path:
    return _write_rows(path, CURVES_HEADER, (
        [
            str(r.l),
            format_float(r.w),
            str(r.v),
            format_float(r.strict_prob),
            format_float(r.tie_resolved_prob),
            format_float(r.mc_mean),
            format_float(r.mc_stderr),
        ]
        for r in rows
    ))


def write_tradeoff_csv(path: PathLike, rows: Sequence[TradeoffRow]) -> Path:
    return _write_rows(path, TRADEOFF_HEADER, (
        [
            str(r.l),
            format_float(r.w),
            str(r.v),
            str(r.examples),
            format_float(r.label_accuracy),
            format_float(r.expected_correct),
            format_float(r.expected_incorrect),
            format_float(r.unpooled_correct),
            format_float(r.unpooled_incorrect),
        ]
        for r in rows
    ))
