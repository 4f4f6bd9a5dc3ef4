"""Orchestrador principal: configuracion -> oracle/politica -> campana -> archivos"""

from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, List, Optional, Sequence, Tuple, Union

from src.config.settings import settings
from src.models.labeling import Example
from src.models.results import CampaignResult, CampaignSummary, CurveRow, TradeoffRow
from src.models.run_config import PokerOracleConfig, RunConfig, UniformOracleConfig
from src.services.campaign_service import run_campaign, summarize
from src.services.mnist_service import RelabelOutput, relabel_campaign
from src.services.oracle_service import Oracle, UniformNoiseOracle
from src.services.poker_service import PokerOracle
from src.services.policy_service import AnyPolicy, parse_policy
from src.services.stats_service import correctness_curves, tradeoff_table
from src.utils.exceptions import BalancedMatchupError, ConfigError, NoiseModelError, PolicySpecError
from src.utils.idx_format import read_idx_images, read_idx_labels
from src.utils.logger import get_logger
from src.utils.result_writer import (
    write_curves_csv,
    write_examples_csv,
    write_summary,
    write_tradeoff_csv,
)


EXAMPLES_FILE = "examples.csv"
SUMMARY_FILE = "summary.txt"


@dataclass
class SimulationOutput:
    """Resultado de una simulacion y los archivos escritos"""
    result: CampaignResult
    summary: CampaignSummary
    examples_path: Path
    summary_path: Path


class LabelingOrchestrator:
    """
    Coordina cada comando:
    1. Validacion completa de la configuracion (nada se escribe si falla)
    2. Construccion de oracle y politica
    3. Ejecucion
    4. Escritura de resultados
    """

    def __init__(self, threads: Optional[int] = None):
        self.logger = get_logger("orchestrator")
        self.threads = threads if threads is not None else settings.threads

    # ------------------------------------------------------------------
    # Construccion
    # ------------------------------------------------------------------

    def build_oracle(self, config: Union[UniformOracleConfig, PokerOracleConfig]) -> Oracle:
        """
        Raises:
            ConfigError: Si el enfrentamiento de poker esta exactamente equilibrado
        """
        if isinstance(config, UniformOracleConfig):
            return UniformNoiseOracle(config.l, config.w)
        p1, p2, flop = config.cards()
        try:
            return PokerOracle(p1, p2, flop)
        except BalancedMatchupError as e:
            raise ConfigError([("oracle", str(e))]) from None

    @staticmethod
    def example_stream(oracle: Oracle, count: int) -> Iterator[Example]:
        """Ejemplos simulados; con ruido uniforme la etiqueta correcta es id mod l"""
        if isinstance(oracle, PokerOracle):
            for example_id in range(count):
                yield oracle.example(example_id)
            return
        classes = oracle.classes()
        for example_id in range(count):
            yield Example(id=example_id, true_label=example_id % classes)

    @staticmethod
    def parse_policy_option(text: str, location: str = "policy") -> AnyPolicy:
        try:
            return parse_policy(text)
        except PolicySpecError as e:
            raise ConfigError([(location, str(e))]) from None

    # ------------------------------------------------------------------
    # Comandos
    # ------------------------------------------------------------------

    def simulate(self, config: RunConfig) -> SimulationOutput:
        """Correr la campana descrita por la configuracion y escribir CSV + resumen"""
        oracle = self.build_oracle(config.oracle)
        policy = self.parse_policy_option(config.policy)

        self.logger.info(
            "Simulando campana",
            oracle=config.oracle.kind,
            policy=policy.spec(),
            s_max=config.s_max,
            examples=config.examples,
            seed=config.seed
        )
        result = run_campaign(
            oracle,
            policy,
            config.s_max,
            self.example_stream(oracle, config.examples),
            config.seed,
            threads=config.threads
        )
        summary = summarize(result)

        out_dir = Path(config.out_dir)
        examples_path = write_examples_csv(out_dir / EXAMPLES_FILE, result)
        summary_path = write_summary(out_dir / SUMMARY_FILE, summary)
        return SimulationOutput(
            result=result,
            summary=summary,
            examples_path=examples_path,
            summary_path=summary_path
        )

    def relabel_mnist(
        self,
        labels_path: Union[str, Path],
        w: float,
        policy_text: str,
        s_max: int,
        seed: int,
        out_dir: Union[str, Path],
        images_path: Optional[Union[str, Path]] = None
    ) -> RelabelOutput:
        """Leer IDX locales, re-etiquetar con ruido w y escribir los archivos de salida"""
        issues: List[Tuple[str, str]] = []
        policy = None
        try:
            policy = parse_policy(policy_text)
        except PolicySpecError as e:
            issues.append(("policy", str(e)))
        try:
            UniformNoiseOracle(10, w)
        except NoiseModelError as e:
            issues.append(("w", str(e)))
        if s_max < 1:
            issues.append(("s_max", f"debe ser >= 1, llego {s_max}"))
        if issues:
            raise ConfigError(issues)

        labels = read_idx_labels(labels_path)
        images = read_idx_images(images_path) if images_path is not None else None
        return relabel_campaign(labels, w, policy, s_max, seed, out_dir, images=images, threads=self.threads)

    def curves(
        self,
        l: int,
        noise_levels: Sequence[float],
        validations: Sequence[int],
        trials: int,
        seed: int,
        out_path: Union[str, Path]
    ) -> List[CurveRow]:
        """Curvas de probabilidad correcta; la grilla se valida completa antes de escribir"""
        try:
            rows = correctness_curves(l, noise_levels, validations, trials, seed)
        except NoiseModelError as e:
            raise ConfigError([("grid", str(e))]) from None
        write_curves_csv(out_path, rows)
        return rows

    def tradeoff(
        self,
        l: int,
        w: float,
        s_max: int,
        validations: Optional[Sequence[int]],
        out_path: Optional[Union[str, Path]] = None
    ) -> List[TradeoffRow]:
        try:
            rows = tradeoff_table(l, w, s_max, validations)
        except NoiseModelError as e:
            raise ConfigError([("grid", str(e))]) from None
        if out_path is not None:
            write_tradeoff_csv(out_path, rows)
        return rows
