"""Modelos de resultados: probabilidades, validaciones y campanas"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional

from src.models.labeling import LabelId, VoteTally


@dataclass(frozen=True)
class MajorityProbResult:
    """Probabilidad de que el voto mayoritario devuelva la etiqueta correcta"""
    strict_prob: float  # conteo correcto estrictamente mayor que todos los demas
    tie_resolved_prob: float  # strict_prob + empates resueltos al azar


@dataclass(frozen=True)
class MonteCarloEstimate:
    """Estimacion Monte Carlo de una proporcion"""
    mean: float
    trials: int

    @property
    def std_error(self) -> float:
        return math.sqrt(self.mean * (1.0 - self.mean) / self.trials)


class PolicyDecision(str, Enum):
    CONTINUE = "CONTINUE"
    FINALIZE = "FINALIZE"


class FinalizeReason(str, Enum):
    POLICY = "POLICY"
    BUDGET = "BUDGET"
    CAP = "CAP"


@dataclass
class ValidationOutcome:
    """Resultado de validar un ejemplo"""
    tally: VoteTally
    label: LabelId
    queries_used: int
    reason: FinalizeReason

    @property
    def peaked(self) -> bool:
        return self.tally.peaked


@dataclass
class LabeledExample:
    """Ejemplo del conjunto de entrenamiento T con su procedencia"""
    example_id: int
    assigned_label: LabelId
    true_label: LabelId
    queries_used: int
    tally: VoteTally
    finalize_reason: FinalizeReason
    peaked: bool

    @property
    def correct(self) -> bool:
        return self.assigned_label == self.true_label


@dataclass
class CampaignResult:
    """Resultado de una campana de etiquetado"""
    s_max: int
    labeled: List[LabeledExample] = field(default_factory=list)

    @property
    def total_queries(self) -> int:
        return sum(e.queries_used for e in self.labeled)

    @property
    def label_accuracy(self) -> Optional[float]:
        if not self.labeled:
            return None
        return sum(1 for e in self.labeled if e.correct) / len(self.labeled)

    @property
    def mean_validations(self) -> Optional[float]:
        if not self.labeled:
            return None
        return self.total_queries / len(self.labeled)

    @property
    def std_validations(self) -> Optional[float]:
        """Desviacion estandar poblacional de consultas por ejemplo"""
        mean = self.mean_validations
        if mean is None:
            return None
        return math.sqrt(sum((e.queries_used - mean) ** 2 for e in self.labeled) / len(self.labeled))


@dataclass(frozen=True)
class CampaignSummary:
    """Metricas agregadas de una campana"""
    labeled: int
    total_queries: int
    s_max: int
    label_accuracy: Optional[float]
    mean_validations: Optional[float]
    std_validations: Optional[float]
    max_validations: int
    peaked: int
    finalize_reasons: Dict[str, int]


@dataclass(frozen=True)
class CurveRow:
    """Fila de la curva de probabilidad correcta vs validaciones"""
    l: int
    w: float
    v: int
    strict_prob: float
    tie_resolved_prob: float
    mc_mean: float
    mc_stderr: float


@dataclass(frozen=True)
class TradeoffRow:
    """Cantidad vs calidad para un valor fijo de v bajo presupuesto s_max"""
    l: int
    w: float
    v: int
    examples: int
    label_accuracy: float

    @property
    def expected_correct(self) -> float:
        return self.examples * self.label_accuracy

    @property
    def expected_incorrect(self) -> float:
        return self.examples - self.expected_correct

    @property
    def unpooled_correct(self) -> float:
        return self.examples * self.v * (1.0 - self.w)

    @property
    def unpooled_incorrect(self) -> float:
        return self.examples * self.v * self.w
