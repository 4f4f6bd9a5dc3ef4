"""Lectura y escritura de archivos IDX (formato de MNIST)"""

import struct
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence, Union

import numpy as np

from src.utils.exceptions import IdxFormatError


LABELS_MAGIC = 0x00000801
IMAGES_MAGIC = 0x00000803
MNIST_ROWS = 28
MNIST_COLS = 28
MNIST_CLASSES = 10

PathLike = Union[str, Path]


@dataclass
class IdxLabels:
    """Etiquetas IDX: un byte por item (0..9)"""
    labels: np.ndarray = field(repr=False)

    @property
    def count(self) -> int:
        return int(self.labels.shape[0])


@dataclass
class IdxImages:
    """Imagenes IDX: count x rows x cols bytes"""
    count: int
    rows: int
    cols: int
    pixels: np.ndarray = field(repr=False)


def _read_bytes(path: PathLike) -> bytes:
    return Path(path).read_bytes()


def read_idx_labels(path: PathLike) -> IdxLabels:
    """
    Leer un archivo de etiquetas IDX.

    Formato (big-endian):
        0000  int32  0x00000801  magic
        0004  int32  N           cantidad de items
        0008  ubyte  ...         etiquetas

    Raises:
        IdxFormatError: Magic incorrecto, archivo truncado o etiqueta >= 10
    """
    data = _read_bytes(path)
    if len(data) < 8:
        raise IdxFormatError(str(path), "Archivo demasiado corto para un header IDX de etiquetas")
    magic, count = struct.unpack(">II", data[:8])
    if magic != LABELS_MAGIC:
        raise IdxFormatError(str(path), f"Magic 0x{magic:08x} no corresponde a etiquetas (0x{LABELS_MAGIC:08x})")
    payload = data[8:]
    if len(payload) < count:
        raise IdxFormatError(str(path), f"Archivo truncado: header dice {count} etiquetas, hay {len(payload)}")

    labels = np.frombuffer(payload[:count], dtype=np.uint8).copy()
    if count and int(labels.max()) >= MNIST_CLASSES:
        raise IdxFormatError(str(path), f"Etiqueta {int(labels.max())} fuera de rango (0..9)")
    return IdxLabels(labels=labels)


def read_idx_images(path: PathLike) -> IdxImages:
    """
    Leer un archivo de imagenes IDX de 28x28.

    Raises:
        IdxFormatError: Magic incorrecto, dimensiones distintas de 28x28 o archivo truncado
    """
    data = _read_bytes(path)
    if len(data) < 16:
        raise IdxFormatError(str(path), "Archivo demasiado corto para un header IDX de imagenes")
    magic, count, rows, cols = struct.unpack(">IIII", data[:16])
    if magic != IMAGES_MAGIC:
        raise IdxFormatError(str(path), f"Magic 0x{magic:08x} no corresponde a imagenes (0x{IMAGES_MAGIC:08x})")
    if (rows, cols) != (MNIST_ROWS, MNIST_COLS):
        raise IdxFormatError(str(path), f"Dimensiones {rows}x{cols}, se esperaba {MNIST_ROWS}x{MNIST_COLS}")
    expected = count * rows * cols
    payload = data[16:]
    if len(payload) < expected:
        raise IdxFormatError(str(path), f"Archivo truncado: se esperaban {expected} bytes de pixeles, hay {len(payload)}")

    pixels = np.frombuffer(payload[:expected], dtype=np.uint8).reshape(count, rows, cols).copy()
    return IdxImages(count=count, rows=rows, cols=cols, pixels=pixels)


def write_idx_labels(path: PathLike, labels: Sequence[int]) -> Path:
    """Escribir etiquetas en formato IDX (magic 0x00000801)"""
    array = np.asarray(labels, dtype=np.uint8)
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_bytes(struct.pack(">II", LABELS_MAGIC, int(array.shape[0])) + array.tobytes())
    return target


def write_idx_images(path: PathLike, pixels: np.ndarray) -> Path:
    """Escribir imagenes en formato IDX (magic 0x00000803); util para fixtures"""
    array = np.asarray(pixels, dtype=np.uint8)
    count, rows, cols = array.shape
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_bytes(struct.pack(">IIII", IMAGES_MAGIC, count, rows, cols) + array.tobytes())
    return target
