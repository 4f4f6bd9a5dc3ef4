"""Streams aleatorios deterministas y divisibles (uno por ejemplo)"""

from dataclasses import dataclass, field

import numpy as np


MASK64 = 2**64 - 1


@dataclass
class RandomStream:
    """
    Stream con dueno unico derivado de (master_seed, stream_id).

    Usa Philox (generador por contador) sobre un SeedSequence cuyo spawn_key
    es el stream_id, asi cada ejemplo tiene su secuencia independiente sin
    importar el orden en que se procese.
    """
    master_seed: int
    stream_id: int
    generator: np.random.Generator = field(repr=False)

    def random(self) -> float:
        """Un double uniforme en [0, 1)"""
        return float(self.generator.random())

    def random_n(self, n: int) -> np.ndarray:
        """n doubles uniformes; equivale a n llamadas consecutivas a random()"""
        return self.generator.random(n)

    def integers(self, high: int) -> int:
        """Entero uniforme en [0, high)"""
        return int(self.generator.integers(high))


def derive_stream(master_seed: int, stream_id: int) -> RandomStream:
    """
    Derivar el stream (master_seed, stream_id).

    Es puro: dos llamadas con los mismos argumentos producen secuencias
    identicas; stream_ids distintos producen secuencias independientes.
    """
    seed = int(master_seed) & MASK64
    sid = int(stream_id) & MASK64
    sequence = np.random.SeedSequence(entropy=seed, spawn_key=(sid,))
    generator = np.random.Generator(np.random.Philox(sequence))
    return RandomStream(master_seed=seed, stream_id=sid, generator=generator)
