"""Excepciones personalizadas para el sistema de etiquetado con presupuesto"""

from typing import List, Sequence, Tuple


class LabelingError(Exception):
    """Error base de la libreria (todo lo que el CLI reporta con codigo 2)"""
    pass


class NoiseModelError(LabelingError):
    """Vector de probabilidades o nivel de ruido invalido"""
    pass


class DimensionMismatchError(LabelingError):
    """Conteos y vector de probabilidades con distinto numero de clases"""

    def __init__(self, expected: int, actual: int):
        self.expected = expected
        self.actual = actual
        super().__init__(f"Dimension incompatible: se esperaban {expected} clases, llegaron {actual}")


class EmptyTallyError(LabelingError):
    """Operacion que requiere al menos un voto sobre un conteo vacio"""
    pass


class BudgetExhaustedError(LabelingError):
    """Consulta al oracle sin presupuesto disponible"""

    def __init__(self, requested: int, remaining: int):
        self.requested = requested
        self.remaining = remaining
        super().__init__(
            f"Presupuesto insuficiente: se pidieron {requested} consultas, quedan {remaining}"
        )


class CardError(LabelingError):
    """Carta mal formada, repetida o cantidad de cartas incorrecta"""
    pass


class BalancedMatchupError(LabelingError):
    """Enfrentamiento de poker sin mano favorita (equity exactamente 0.5)"""
    pass


class PolicySpecError(LabelingError):
    """Especificacion de politica que no respeta la gramatica"""
    pass


class IdxFormatError(LabelingError):
    """Archivo IDX con magic, dimensiones o longitud invalidas"""

    def __init__(self, path: str, message: str):
        self.path = path
        self.message = message
        super().__init__(f"[{path}] {message}")


class ConfigError(LabelingError):
    """Configuracion de corrida invalida; lleva todos los problemas encontrados"""

    def __init__(self, issues: Sequence[Tuple[str, str]]):
        self.issues: List[Tuple[str, str]] = list(issues)
        detail = "; ".join(f"{loc}: {msg}" for loc, msg in self.issues)
        super().__init__(f"Configuracion invalida: {detail}")
