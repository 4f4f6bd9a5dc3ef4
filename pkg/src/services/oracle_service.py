"""Oracles ruidosos: toda etiqueta que ve el sistema sale de una consulta"""

import bisect
from typing import List, Protocol, runtime_checkable

import numpy as np

from src.models.labeling import Example, LabelId, ProbabilityVector, VoteTally
from src.utils.exceptions import NoiseModelError
from src.utils.noise_model import make_uniform_noise_vector
from src.utils.random_streams import RandomStream


@runtime_checkable
class Oracle(Protocol):
    """Contrato del oracle O: consultas independientes e identicamente distribuidas"""

    def classes(self) -> int:
        ...

    def query(self, example: Example, rng: RandomStream) -> LabelId:
        ...

    def query_n(self, example: Example, n: int, rng: RandomStream) -> VoteTally:
        ...

    def probability_vector(self, example: Example) -> ProbabilityVector:
        ...


class VectorOracle:
    """
    Oracle definido por un vector de probabilidades arbitrario (ruido no uniforme).

    Cada consulta consume exactamente un double del stream (inversion de la
    CDF), asi query_n(e, a + b) es igual a query_n(e, a) seguido de query_n(e, b).
    """

    def __init__(self, vector: ProbabilityVector):
        self.vector = vector
        self._cdf = vector.cumulative()
        self._cdf_array = np.asarray(self._cdf)

    def classes(self) -> int:
        return self.vector.classes

    def probability_vector(self, example: Example) -> ProbabilityVector:
        return self.vector

    def _sample(self, cdf: List[float], u: float) -> LabelId:
        return min(bisect.bisect_right(cdf, u), len(cdf) - 1)

    def query(self, example: Example, rng: RandomStream) -> LabelId:
        return self._sample(self._cdf, rng.random())

    def query_n(self, example: Example, n: int, rng: RandomStream) -> VoteTally:
        return _tally_from_draws(self._cdf_array, n, rng)


class UniformNoiseOracle:
    """
    Oracle con ruido uniforme: la etiqueta correcta con probabilidad q = 1 - w
    y cada una de las otras con w / (l - 1). La etiqueta correcta sale de
    Example.true_label.
    """

    def __init__(self, l: int, w: float):
        self.l = l
        self.w = w
        # Un vector por etiqueta correcta; el oracle queda inmutable
        self._vectors: List[ProbabilityVector] = [
            make_uniform_noise_vector(l, w, label) for label in range(l)
        ]
        self._cdfs: List[List[float]] = [vector.cumulative() for vector in self._vectors]
        self._cdf_arrays: List[np.ndarray] = [np.asarray(cdf) for cdf in self._cdfs]

    def classes(self) -> int:
        return self.l

    def _check_label(self, example: Example) -> LabelId:
        label = example.true_label
        if not 0 <= label < self.l:
            raise NoiseModelError(
                f"Etiqueta {label} del ejemplo {example.id} fuera de rango para {self.l} clases"
            )
        return label

    def probability_vector(self, example: Example) -> ProbabilityVector:
        return self._vectors[self._check_label(example)]

    def query(self, example: Example, rng: RandomStream) -> LabelId:
        cdf = self._cdfs[self._check_label(example)]
        return min(bisect.bisect_right(cdf, rng.random()), self.l - 1)

    def query_n(self, example: Example, n: int, rng: RandomStream) -> VoteTally:
        return _tally_from_draws(self._cdf_arrays[self._check_label(example)], n, rng)


def _tally_from_draws(cdf: np.ndarray, n: int, rng: RandomStream) -> VoteTally:
    """n consultas vectorizadas: misma secuencia que n llamadas a query()"""
    if n < 1:
        raise ValueError("n debe ser >= 1")
    labels = np.minimum(np.searchsorted(cdf, rng.random_n(n), side="right"), len(cdf) - 1)
    return VoteTally(np.bincount(labels, minlength=len(cdf)).tolist())
