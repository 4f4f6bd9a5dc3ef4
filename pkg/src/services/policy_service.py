"""Politicas de validacion: cuantas veces consultar al oracle antes de fijar la etiqueta"""

import math
from dataclasses import dataclass
from typing import Dict, Optional, Protocol, Tuple, Union

from src.models.labeling import BudgetLedger, Example, VoteTally
from src.models.results import FinalizeReason, PolicyDecision, ValidationOutcome
from src.services.oracle_service import Oracle
from src.services.stats_service import (
    STANDARD_V_GRID,
    chi_square_p_value_from_moments,
    majority_vote,
)
from src.utils.exceptions import BudgetExhaustedError, PolicySpecError
from src.utils.random_streams import RandomStream


DEFAULT_STAGE_FRACTION = 0.10
DEFAULT_CHI_THRESHOLD = 0.05


class Policy(Protocol):
    def decide(self, tally: VoteTally, budget: BudgetLedger) -> PolicyDecision:
        ...

    def next_batch(self, tally: VoteTally, budget: BudgetLedger) -> int:
        ...

    def spec(self) -> str:
        ...


@dataclass(frozen=True)
class FixedPolicy:
    """v validaciones por ejemplo"""
    v: int

    def __post_init__(self):
        if self.v < 1:
            raise PolicySpecError(f"fixed: v debe ser >= 1, llego {self.v}")

    def target(self, budget: BudgetLedger) -> int:
        return self.v

    def decide(self, tally: VoteTally, budget: BudgetLedger) -> PolicyDecision:
        if budget.remaining == 0 or tally.total >= self.v:
            return PolicyDecision.FINALIZE
        return PolicyDecision.CONTINUE

    def next_batch(self, tally: VoteTally, budget: BudgetLedger) -> int:
        """Consultas que se pueden emitir de una vez sin cambiar el resultado"""
        return max(0, min(self.v - tally.total, budget.remaining))

    def spec(self) -> str:
        return f"fixed:v={self.v}"


@dataclass(frozen=True)
class ScheduledPolicy:
    """
    v que avanza por `stages` cada `stage_fraction` del presupuesto consumido.

    La ultima etapa cubre todo el presupuesto restante.
    """
    stages: Tuple[int, ...]
    stage_fraction: float = DEFAULT_STAGE_FRACTION

    def __post_init__(self):
        stages = tuple(int(v) for v in self.stages)
        object.__setattr__(self, 'stages', stages)
        if not stages:
            raise PolicySpecError("scheduled: se requiere al menos una etapa")
        if any(v < 1 for v in stages):
            raise PolicySpecError(f"scheduled: las etapas deben ser >= 1: {stages}")
        if any(b <= a for a, b in zip(stages, stages[1:])):
            raise PolicySpecError(f"scheduled: las etapas deben ser estrictamente crecientes: {stages}")
        if not 0.0 < self.stage_fraction <= 1.0:
            raise PolicySpecError(f"scheduled: frac debe estar en (0, 1], llego {self.stage_fraction}")

    def current_stage_v(self, budget: BudgetLedger) -> int:
        return current_stage_v(self, budget)

    def decide(self, tally: VoteTally, budget: BudgetLedger) -> PolicyDecision:
        if budget.remaining == 0 or tally.total >= self.current_stage_v(budget):
            return PolicyDecision.FINALIZE
        return PolicyDecision.CONTINUE

    def next_batch(self, tally: VoteTally, budget: BudgetLedger) -> int:
        # Las etapas solo crecen: llegar al v actual nunca cruza una decision de parar
        return max(0, min(self.current_stage_v(budget) - tally.total, budget.remaining))

    def spec(self) -> str:
        stages = ",".join(str(v) for v in self.stages)
        return f"scheduled:stages={stages};frac={self.stage_fraction:g}"


@dataclass(frozen=True)
class ChiSquarePolicy:
    """Consultar hasta que el p-valor contra la uniforme baje del umbral"""
    threshold: float = DEFAULT_CHI_THRESHOLD
    max_validations: Optional[int] = None

    def __post_init__(self):
        if not 0.0 < self.threshold < 1.0:
            raise PolicySpecError(f"chi: threshold debe estar en (0, 1), llego {self.threshold}")
        if self.max_validations is not None and self.max_validations < 1:
            raise PolicySpecError(f"chi: cap debe ser >= 1 (0 = sin tope), llego {self.max_validations}")

    def rejects_uniform(self, tally: VoteTally) -> bool:
        if tally.total == 0:
            return False
        p_value = chi_square_p_value_from_moments(tally.classes, tally.total, tally.sum_squares)
        return p_value <= self.threshold

    def cap_reached(self, tally: VoteTally) -> bool:
        return self.max_validations is not None and tally.total >= self.max_validations

    def decide(self, tally: VoteTally, budget: BudgetLedger) -> PolicyDecision:
        if budget.remaining == 0 or self.cap_reached(tally) or self.rejects_uniform(tally):
            return PolicyDecision.FINALIZE
        return PolicyDecision.CONTINUE

    def next_batch(self, tally: VoteTally, budget: BudgetLedger) -> int:
        return 1 if self.decide(tally, budget) is PolicyDecision.CONTINUE else 0

    def spec(self) -> str:
        return f"chi:threshold={self.threshold:g};cap={self.max_validations or 0}"


AnyPolicy = Union[FixedPolicy, ScheduledPolicy, ChiSquarePolicy]


def decide(policy: AnyPolicy, tally: VoteTally, budget: BudgetLedger) -> PolicyDecision:
    """CONTINUE para pedir otra consulta, FINALIZE para fijar la etiqueta"""
    return policy.decide(tally, budget)


def current_stage_v(schedule: ScheduledPolicy, budget: BudgetLedger) -> int:
    """
    v de la etapa vigente: stages[min(floor(f / stage_fraction), k - 1)] con
    f = consumed / s_max.
    """
    if budget.s_max <= 0:
        raise PolicySpecError("scheduled: s_max debe ser positivo")
    # Tolerancia para que 30 / (100 * 0.1) no caiga en la etapa 2
    index = math.floor(budget.consumed / (budget.s_max * schedule.stage_fraction) + 1e-9)
    return schedule.stages[min(index, len(schedule.stages) - 1)]


# ---------------------------------------------------------------------------
# Gramatica: fixed:v=5 | scheduled:stages=1,3,5,7;frac=0.1 | scheduled:range=1..7
#            | chi:threshold=0.05;cap=0
# ---------------------------------------------------------------------------

def _parse_params(kind: str, body: str) -> Dict[str, str]:
    params: Dict[str, str] = {}
    if not body.strip():
        return params
    for item in body.split(";"):
        if "=" not in item:
            raise PolicySpecError(f"{kind}: parametro mal formado {item!r} (se espera clave=valor)")
        key, value = item.split("=", 1)
        key = key.strip()
        if key in params:
            raise PolicySpecError(f"{kind}: parametro repetido {key!r}")
        params[key] = value.strip()
    return params


def _reject_unknown(kind: str, params: Dict[str, str], allowed: Tuple[str, ...]) -> None:
    unknown = sorted(set(params) - set(allowed))
    if unknown:
        raise PolicySpecError(f"{kind}: parametros desconocidos {unknown}; validos: {list(allowed)}")


def _as_int(kind: str, key: str, value: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise PolicySpecError(f"{kind}: {key} debe ser entero, llego {value!r}") from None


def _as_float(kind: str, key: str, value: str) -> float:
    try:
        return float(value)
    except ValueError:
        raise PolicySpecError(f"{kind}: {key} debe ser numero, llego {value!r}") from None


def grid_range(start: int, end: int) -> Tuple[int, ...]:
    """Sub-rango de la grilla estandar, p. ej. (1, 7) -> (1, 3, 5, 7)"""
    if start not in STANDARD_V_GRID or end not in STANDARD_V_GRID:
        raise PolicySpecError(f"scheduled: range {start}..{end} debe usar valores de {STANDARD_V_GRID}")
    if end < start:
        raise PolicySpecError(f"scheduled: range {start}..{end} esta invertido")
    return tuple(v for v in STANDARD_V_GRID if start <= v <= end)


def parse_policy(text: str) -> AnyPolicy:
    """
    Parsear una especificacion de politica.

    Raises:
        PolicySpecError: Si el texto no respeta la gramatica o los valores son invalidos
    """
    if not isinstance(text, str) or ":" not in text:
        raise PolicySpecError(f"Politica mal formada: {text!r} (ej.: fixed:v=5)")
    kind, body = text.split(":", 1)
    kind = kind.strip().lower()
    params = _parse_params(kind, body)

    if kind == "fixed":
        _reject_unknown(kind, params, ("v",))
        if "v" not in params:
            raise PolicySpecError("fixed: falta v")
        return FixedPolicy(v=_as_int(kind, "v", params["v"]))

    if kind == "scheduled":
        _reject_unknown(kind, params, ("stages", "range", "frac"))
        if ("stages" in params) == ("range" in params):
            raise PolicySpecError("scheduled: indicar exactamente uno de stages o range")
        if "stages" in params:
            stages = tuple(_as_int(kind, "stages", v) for v in params["stages"].split(",") if v.strip())
        else:
            bounds = params["range"].split("..")
            if len(bounds) != 2:
                raise PolicySpecError(f"scheduled: range mal formado {params['range']!r} (ej.: 1..7)")
            stages = grid_range(_as_int(kind, "range", bounds[0]), _as_int(kind, "range", bounds[1]))
        fraction = _as_float(kind, "frac", params["frac"]) if "frac" in params else DEFAULT_STAGE_FRACTION
        return ScheduledPolicy(stages=stages, stage_fraction=fraction)

    if kind == "chi":
        _reject_unknown(kind, params, ("threshold", "cap"))
        threshold = _as_float(kind, "threshold", params["threshold"]) if "threshold" in params else DEFAULT_CHI_THRESHOLD
        cap = _as_int(kind, "cap", params["cap"]) if "cap" in params else 0
        if cap < 0:
            raise PolicySpecError(f"chi: cap no puede ser negativo, llego {cap}")
        return ChiSquarePolicy(threshold=threshold, max_validations=cap or None)

    raise PolicySpecError(f"Tipo de politica desconocido: {kind!r} (fixed, scheduled o chi)")


# ---------------------------------------------------------------------------
# Validacion de un ejemplo
# ---------------------------------------------------------------------------

def _finalize_reason(policy: AnyPolicy, tally: VoteTally, budget: BudgetLedger) -> FinalizeReason:
    if isinstance(policy, ChiSquarePolicy):
        if policy.rejects_uniform(tally):
            return FinalizeReason.POLICY
        if policy.cap_reached(tally):
            return FinalizeReason.CAP
        return FinalizeReason.BUDGET
    target = policy.v if isinstance(policy, FixedPolicy) else policy.current_stage_v(budget)
    return FinalizeReason.POLICY if tally.total >= target else FinalizeReason.BUDGET


def validate_example(
    policy: AnyPolicy,
    oracle: Oracle,
    example: Example,
    budget: BudgetLedger,
    rng: RandomStream
) -> ValidationOutcome:
    """
    Consultar al oracle mientras la politica diga CONTINUE y votar la etiqueta.

    Cada consulta debita una unidad del presupuesto. Las consultas consecutivas
    que la politica ya tiene decididas se piden en bloque (query_n), lo que
    consume el stream igual que consultas individuales.

    Raises:
        BudgetExhaustedError: Si no queda presupuesto para la primera consulta
    """
    if budget.remaining < 1:
        raise BudgetExhaustedError(requested=1, remaining=budget.remaining)

    tally = VoteTally.empty(oracle.classes())
    while policy.decide(tally, budget) is PolicyDecision.CONTINUE:
        batch = max(1, policy.next_batch(tally, budget))
        if batch == 1:
            tally.add(oracle.query(example, rng))
        else:
            drawn = oracle.query_n(example, batch, rng)
            for label, count in enumerate(drawn.counts):
                if count:
                    tally.add(label, count)
        budget.consume(batch)

    label = majority_vote(tally, rng)
    return ValidationOutcome(
        tally=tally,
        label=label,
        queries_used=tally.total,
        reason=_finalize_reason(policy, tally, budget)
    )
