"""Constructor del modelo de ruido uniforme"""

from src.models.labeling import ProbabilityVector
from src.utils.exceptions import NoiseModelError


def max_uniform_noise(l: int) -> float:
    """Cota superior (exclusiva) de w para que la etiqueta correcta siga siendo la mas probable"""
    return (l - 1) / l


def make_uniform_noise_vector(l: int, w: float, j: int) -> ProbabilityVector:
    """
    Vector con la etiqueta j con probabilidad 1 - w y el resto w / (l - 1).

    Args:
        l: Numero de clases (>= 2)
        w: Nivel de ruido en [0, (l - 1) / l)
        j: Indice de la etiqueta correcta

    Raises:
        NoiseModelError: Si l < 2 o w deja a la etiqueta correcta sin ser el maximo estricto
    """
    if l < 2:
        raise NoiseModelError(f"Se requieren al menos 2 clases, llegaron {l}")
    if not 0.0 <= w < max_uniform_noise(l):
        raise NoiseModelError(
            f"Nivel de ruido w={w} fuera de [0, {max_uniform_noise(l):.6g}) para l={l}: "
            "la etiqueta correcta no seria estrictamente la mas probable"
        )
    if not 0 <= j < l:
        raise NoiseModelError(f"Indice correcto {j} fuera de rango para {l} clases")

    other = w / (l - 1)
    probs = [other] * l
    probs[j] = 1.0 - w
    return ProbabilityVector(probs=tuple(probs), correct_index=j)
