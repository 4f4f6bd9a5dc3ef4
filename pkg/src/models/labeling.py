"""Modelos de datos del proceso de etiquetado con oracle ruidoso"""

import threading
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, Tuple

from src.utils.exceptions import BudgetExhaustedError, NoiseModelError


# Indice de etiqueta en [0, l)
LabelId = int

PROBABILITY_TOLERANCE = 1e-12


@dataclass(frozen=True)
class Example:
    """Ejemplo a etiquetar; true_label es la etiqueta correcta f(x)"""
    id: int
    true_label: LabelId
    payload: Optional[bytes] = field(default=None, repr=False)


@dataclass(frozen=True)
class ProbabilityVector:
    """
    Distribucion de etiquetas que devuelve el oracle para un ejemplo.

    correct_index debe ser el unico maximo estricto del vector.
    """
    probs: Tuple[float, ...]
    correct_index: int

    def __post_init__(self):
        probs = tuple(float(p) for p in self.probs)
        object.__setattr__(self, 'probs', probs)

        if len(probs) < 2:
            raise NoiseModelError(f"Se requieren al menos 2 clases, llegaron {len(probs)}")
        if not 0 <= self.correct_index < len(probs):
            raise NoiseModelError(
                f"Indice correcto {self.correct_index} fuera de rango para {len(probs)} clases"
            )
        if any(p < 0 for p in probs):
            raise NoiseModelError("Las probabilidades no pueden ser negativas")
        if abs(sum(probs) - 1.0) > PROBABILITY_TOLERANCE:
            raise NoiseModelError(f"Las probabilidades suman {sum(probs)!r}, no 1")

        q = probs[self.correct_index]
        for k, p in enumerate(probs):
            if k != self.correct_index and p >= q:
                raise NoiseModelError(
                    f"La etiqueta correcta ({self.correct_index}) debe ser estrictamente "
                    f"la mas probable; la etiqueta {k} tiene {p} >= {q}"
                )

    @property
    def classes(self) -> int:
        return len(self.probs)

    @property
    def q(self) -> float:
        """Probabilidad de recibir la etiqueta correcta"""
        return self.probs[self.correct_index]

    @property
    def w(self) -> float:
        """Probabilidad total de recibir una etiqueta incorrecta"""
        return 1.0 - self.q

    def cumulative(self) -> List[float]:
        """CDF acumulada, usada para muestrear por inversion"""
        total = 0.0
        cdf = []
        for p in self.probs:
            total += p
            cdf.append(total)
        return cdf


class VoteTally:
    """
    Conteo de respuestas del oracle por etiqueta.

    Mantiene el total y la suma de cuadrados para que el estadistico
    chi-cuadrado se calcule sin recorrer los conteos.
    """

    __slots__ = ('counts', 'total', 'sum_squares')

    def __init__(self, counts: Sequence[int]):
        if len(counts) < 1:
            raise NoiseModelError("Un conteo necesita al menos una clase")
        if any(int(c) < 0 for c in counts):
            raise NoiseModelError("Los conteos no pueden ser negativos")
        self.counts: List[int] = [int(c) for c in counts]
        self.total: int = sum(self.counts)
        self.sum_squares: int = sum(c * c for c in self.counts)

    @classmethod
    def empty(cls, classes: int) -> "VoteTally":
        return cls([0] * classes)

    @classmethod
    def from_labels(cls, classes: int, labels: Iterable[LabelId]) -> "VoteTally":
        tally = cls.empty(classes)
        tally.extend(labels)
        return tally

    @property
    def classes(self) -> int:
        return len(self.counts)

    def add(self, label: LabelId, times: int = 1) -> None:
        """Registrar `times` respuestas con la etiqueta dada"""
        current = self.counts[label]
        self.counts[label] = current + times
        self.total += times
        self.sum_squares += times * (2 * current + times)

    def extend(self, labels: Iterable[LabelId]) -> None:
        for label in labels:
            self.add(int(label))

    def max_labels(self) -> List[LabelId]:
        """Etiquetas que alcanzan el conteo maximo"""
        top = max(self.counts)
        return [k for k, c in enumerate(self.counts) if c == top]

    @property
    def peaked(self) -> bool:
        """True si no hay una moda unica (caso 'sin pico claro')"""
        return self.total > 0 and len(self.max_labels()) > 1

    def copy(self) -> "VoteTally":
        return VoteTally(self.counts)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, VoteTally) and self.counts == other.counts

    def __repr__(self) -> str:
        return f"VoteTally({self.counts})"


class BudgetLedger:
    """
    Presupuesto global de consultas s_max.

    consumed nunca supera s_max y solo crece; los debitos se serializan
    con un lock para poder compartir el ledger entre workers.
    """

    def __init__(self, s_max: int, consumed: int = 0):
        if s_max < 0 or consumed < 0 or consumed > s_max:
            raise ValueError(f"Ledger invalido: s_max={s_max}, consumed={consumed}")
        self.s_max = int(s_max)
        self._consumed = int(consumed)
        self._lock = threading.Lock()

    @property
    def consumed(self) -> int:
        return self._consumed

    @property
    def remaining(self) -> int:
        return self.s_max - self._consumed

    @property
    def fraction_consumed(self) -> float:
        return self._consumed / self.s_max if self.s_max else 1.0

    def consume(self, amount: int = 1) -> None:
        """Debitar `amount` consultas; excederse es un error, no se satura"""
        if amount < 0:
            raise ValueError("amount debe ser no negativo")
        with self._lock:
            remaining = self.s_max - self._consumed
            if amount > remaining:
                raise BudgetExhaustedError(requested=amount, remaining=remaining)
            self._consumed += amount

    def snapshot(self) -> "BudgetLedger":
        """Copia privada con el mismo estado (para validaciones especulativas)"""
        return BudgetLedger(self.s_max, self._consumed)

    def __repr__(self) -> str:
        return f"BudgetLedger(s_max={self.s_max}, consumed={self._consumed})"
