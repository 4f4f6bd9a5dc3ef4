"""Simulador de campanas de etiquetado bajo presupuesto"""

import itertools
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from typing import Iterable, Iterator, List, Optional

from src.config.settings import settings
from src.models.labeling import BudgetLedger, Example
from src.models.results import (
    CampaignResult,
    CampaignSummary,
    FinalizeReason,
    LabeledExample,
    ValidationOutcome,
)
from src.services.oracle_service import Oracle
from src.services.policy_service import AnyPolicy, ScheduledPolicy, current_stage_v, validate_example
from src.utils.logger import get_logger
from src.utils.random_streams import derive_stream


logger = get_logger("campaign")


def _batches(examples: Iterable[Example], size: int) -> Iterator[List[Example]]:
    iterator = iter(examples)
    while True:
        batch = list(itertools.islice(iterator, size))
        if not batch:
            return
        yield batch


class CampaignRunner:
    """
    Ejecuta una politica contra un oracle hasta agotar presupuesto o ejemplos.

    Los ejemplos se procesan por lotes de tamano fijo. Dentro de un lote cada
    ejemplo se valida contra una copia privada del ledger tomada al inicio del
    lote (en paralelo si threads > 1) y luego se confirma en orden contra el
    ledger compartido; si el ledger real cambiaria la decision, el ejemplo se
    valida de nuevo desde el estado real. El resultado no depende del numero
    de threads.

    El pool es de threads: solo se solapan las llamadas de numpy que liberan
    el GIL, el resto del trabajo (politicas, conteos) corre serializado. Con
    threads > 1 la campana no es mas rapida de forma apreciable; el parametro
    existe para mantener la misma interfaz que el CLI y la configuracion.
    """

    def __init__(
        self,
        oracle: Oracle,
        policy: AnyPolicy,
        master_seed: int,
        threads: Optional[int] = None,
        batch_size: Optional[int] = None
    ):
        self.oracle = oracle
        self.policy = policy
        self.master_seed = master_seed
        self.threads = max(1, threads if threads is not None else settings.threads)
        self.batch_size = max(1, batch_size if batch_size is not None else settings.campaign_batch_size)

    def _validate(self, example: Example, ledger: BudgetLedger) -> ValidationOutcome:
        # stream_id = example_id: el resultado no depende del orden de proceso
        rng = derive_stream(self.master_seed, example.id)
        return validate_example(self.policy, self.oracle, example, ledger, rng)

    def _speculation_holds(self, outcome: ValidationOutcome, snapshot: BudgetLedger, ledger: BudgetLedger) -> bool:
        """
        True si validar contra el ledger real daria el mismo resultado.

        Las politicas fija y chi-cuadrado solo miran el presupuesto cuando se
        agota; la politica por etapas ademas necesita la misma etapa en todo
        el tramo consumido.
        """
        if outcome.queries_used > ledger.remaining:
            return False
        if isinstance(self.policy, ScheduledPolicy):
            end = BudgetLedger(ledger.s_max, ledger.consumed + outcome.queries_used)
            return current_stage_v(self.policy, snapshot) == current_stage_v(self.policy, end)
        return True

    def run(self, s_max: int, examples: Iterable[Example]) -> CampaignResult:
        if s_max < 1:
            raise ValueError(f"s_max debe ser >= 1, llego {s_max}")

        ledger = BudgetLedger(s_max)
        result = CampaignResult(s_max=s_max)
        logger.info(
            "Iniciando campana",
            policy=self.policy.spec(),
            s_max=s_max,
            threads=self.threads,
            master_seed=self.master_seed
        )

        executor = ThreadPoolExecutor(max_workers=self.threads) if self.threads > 1 else None
        try:
            for batch in _batches(examples, self.batch_size):
                if ledger.remaining == 0:
                    break
                snapshot = ledger.snapshot()

                def speculate(example: Example) -> ValidationOutcome:
                    return self._validate(example, snapshot.snapshot())

                if executor is not None:
                    outcomes = list(executor.map(speculate, batch))
                else:
                    outcomes = [speculate(example) for example in batch]

                for example, outcome in zip(batch, outcomes):
                    if ledger.remaining == 0:
                        break
                    if not self._speculation_holds(outcome, snapshot, ledger):
                        # Mismo stream: se repite la validacion desde el estado real
                        outcome = self._validate(example, ledger.snapshot())
                    ledger.consume(outcome.queries_used)
                    result.labeled.append(LabeledExample(
                        example_id=example.id,
                        assigned_label=outcome.label,
                        true_label=example.true_label,
                        queries_used=outcome.queries_used,
                        tally=outcome.tally,
                        finalize_reason=outcome.reason,
                        peaked=outcome.peaked
                    ))
        finally:
            if executor is not None:
                executor.shutdown(wait=True)

        if ledger.remaining == 0:
            logger.info("Presupuesto agotado", labeled=len(result.labeled))
        logger.info(
            "Campana completada",
            labeled=len(result.labeled),
            total_queries=result.total_queries,
            label_accuracy=result.label_accuracy
        )
        return result


def run_campaign(
    oracle: Oracle,
    policy: AnyPolicy,
    s_max: int,
    examples: Iterable[Example],
    master_seed: int,
    threads: Optional[int] = None
) -> CampaignResult:
    """Correr una campana; determinista dado (entradas, master_seed)"""
    return CampaignRunner(oracle, policy, master_seed, threads=threads).run(s_max, examples)


def summarize(result: CampaignResult) -> CampaignSummary:
    """Metricas agregadas de la campana (sin ejemplos, la precision queda ausente)"""
    reasons = Counter(e.finalize_reason for e in result.labeled)
    return CampaignSummary(
        labeled=len(result.labeled),
        total_queries=result.total_queries,
        s_max=result.s_max,
        label_accuracy=result.label_accuracy,
        mean_validations=result.mean_validations,
        std_validations=result.std_validations,
        max_validations=max((e.queries_used for e in result.labeled), default=0),
        peaked=sum(1 for e in result.labeled if e.peaked),
        finalize_reasons={reason.value: reasons.get(reason, 0) for reason in FinalizeReason}
    )
