"""Probabilidades del voto mayoritario y prueba chi-cuadrado de bondad de ajuste"""

import math
from functools import lru_cache
from typing import Iterator, List, Optional, Sequence

import numpy as np
from scipy.special import gammaincc, gammaln
from scipy.stats import binom, poisson

from src.config.settings import settings
from src.models.labeling import LabelId, ProbabilityVector, VoteTally
from src.models.results import CurveRow, MajorityProbResult, MonteCarloEstimate, TradeoffRow
from src.utils.exceptions import DimensionMismatchError, EmptyTallyError, NoiseModelError
from src.utils.logger import get_logger
from src.utils.noise_model import make_uniform_noise_vector
from src.utils.random_streams import RandomStream, derive_stream


# Grilla de validaciones fijas del estudio original
STANDARD_V_GRID = (1, 3, 5, 7, 11, 15, 25, 51, 99)

MC_CHUNK = 100_000

logger = get_logger("stats")


# ---------------------------------------------------------------------------
# Multinomial
# ---------------------------------------------------------------------------

def multinomial_pmf(tally: VoteTally, p: ProbabilityVector) -> float:
    """
    Mult(v, p) = v! / (v_1! ... v_l!) * prod p_k^{v_k}

    Raises:
        DimensionMismatchError: Si el conteo y el vector tienen distinto largo
    """
    if tally.classes != p.classes:
        raise DimensionMismatchError(expected=p.classes, actual=tally.classes)

    log_pmf = gammaln(tally.total + 1)
    for count, prob in zip(tally.counts, p.probs):
        if count == 0:
            continue
        if prob == 0.0:
            return 0.0
        log_pmf += count * math.log(prob) - gammaln(count + 1)
    return float(math.exp(log_pmf))


def compositions(total: int, parts: int) -> Iterator[List[int]]:
    """Todas las formas de repartir `total` en `parts` conteos no negativos"""
    if parts == 1:
        yield [total]
        return
    for first in range(total, -1, -1):
        for rest in compositions(total - first, parts - 1):
            yield [first] + rest


# ---------------------------------------------------------------------------
# Probabilidad exacta de recibir la etiqueta correcta
# ---------------------------------------------------------------------------

def _check_majority_args(l: int, q: float, v: int) -> None:
    if l < 2:
        raise NoiseModelError(f"Se requieren al menos 2 clases, llegaron {l}")
    if v < 1:
        raise NoiseModelError(f"Se requiere al menos una validacion, llegaron {v}")
    if not q <= 1.0 or not q > (1.0 - q) / (l - 1):
        raise NoiseModelError(
            f"q={q} no es estrictamente mayor que (1 - q) / (l - 1) para l={l}"
        )


def tally_count(l: int, v: int) -> int:
    """Cantidad de conteos distintos de v consultas sobre l etiquetas"""
    return math.comb(v + l - 1, l - 1)


def strict_majority_prob_exact(
    l: int,
    q: float,
    v: int,
    method: str = "auto"
) -> MajorityProbResult:
    """
    Probabilidad exacta de que el voto mayoritario acierte con ruido uniforme.

    Args:
        l: Numero de clases
        q: Probabilidad de la etiqueta correcta por consulta
        v: Numero de validaciones
        method: "enumerate", "conditioning" o "auto" (enumera mientras el numero
            de conteos no supere settings.enumeration_limit)

    Returns:
        MajorityProbResult con la cota estricta y la probabilidad con desempate al azar
    """
    _check_majority_args(l, q, v)

    if method == "auto":
        method = "enumerate" if tally_count(l, v) <= settings.enumeration_limit else "conditioning"

    if method == "enumerate":
        return _exact_by_enumeration(l, q, v)
    if method == "conditioning":
        return _exact_by_conditioning(l, q, v)
    raise ValueError(f"Metodo desconocido: {method}")


def _log_powers(base: float, v: int) -> np.ndarray:
    """k * log(base) para k = 0..v, con 0^0 = 1 y 0^k = 0"""
    exponents = np.arange(v + 1, dtype=float)
    if base > 0.0:
        return exponents * math.log(base)
    logs = np.full(v + 1, -np.inf)
    logs[0] = 0.0
    return logs


def _exact_by_enumeration(l: int, q: float, v: int) -> MajorityProbResult:
    """Suma Mult(v, p) sobre todas las composiciones de v en l partes (etiqueta correcta = 0)"""
    other = (1.0 - q) / (l - 1)
    # En escala log: v! no cabe en un float desde v = 171
    log_factorials = gammaln(np.arange(v + 2, dtype=float)).tolist()
    log_q = _log_powers(q, v).tolist()
    log_other = _log_powers(other, v).tolist()

    strict = 0.0
    tie_resolved = 0.0
    for correct in range(v, -1, -1):
        rest = v - correct
        log_base = log_factorials[v] + log_q[correct] + log_other[rest] - log_factorials[correct]
        if log_base == -math.inf:
            continue
        for others in compositions(rest, l - 1):
            top = max(others)
            if correct < top:
                continue
            mass = math.exp(log_base - sum(log_factorials[c] for c in others))
            if correct > top:
                strict += mass
                tie_resolved += mass
            else:
                tie_resolved += mass / (1 + others.count(top))

    return MajorityProbResult(strict_prob=min(strict, 1.0), tie_resolved_prob=min(tie_resolved, 1.0))


def _exact_by_conditioning(l: int, q: float, v: int) -> MajorityProbResult:
    """
    Condiciona en el conteo correcto m ~ Binomial(v, q).

    Los v - m votos incorrectos son multinomiales uniformes sobre l - 1
    etiquetas; se representan como Poisson(r / (l - 1)) independientes
    condicionadas a sumar r, y la condicion "todos < m" (o empates en m)
    se obtiene convolucionando las pmf truncadas.
    """
    others = l - 1
    strict = 0.0
    tie_resolved = 0.0

    weights = binom.pmf(np.arange(v + 1), v, q)
    for m in range(1, v + 1):
        weight = float(weights[m])
        if weight == 0.0:
            continue
        r = v - m
        if r == 0:
            strict += weight
            tie_resolved += weight
            continue

        lam = r / others
        below = poisson.pmf(np.arange(m), lam)  # conteos < m
        at_m = float(poisson.pmf(m, lam))
        normalizer = float(poisson.pmf(r, r))

        # powers[k] = pmf de la suma de k etiquetas con conteo < m, truncada en r
        powers = [np.zeros(r + 1)]
        powers[0][0] = 1.0
        for _ in range(others):
            powers.append(np.convolve(powers[-1], below)[:r + 1])

        strict += weight * float(powers[others][r]) / normalizer

        tie_mass = 0.0
        for ties in range(others + 1):
            remaining = r - ties * m
            if remaining < 0:
                break
            base = float(powers[others - ties][remaining])
            tie_mass += math.comb(others, ties) * at_m ** ties * base / (ties + 1)
        tie_resolved += weight * tie_mass / normalizer

    return MajorityProbResult(strict_prob=min(strict, 1.0), tie_resolved_prob=min(tie_resolved, 1.0))


# ---------------------------------------------------------------------------
# Monte Carlo
# ---------------------------------------------------------------------------

def majority_prob_mc(l: int, q: float, v: int, trials: int, rng: RandomStream) -> MonteCarloEstimate:
    """
    Fraccion de simulaciones en que el voto mayoritario (desempate al azar) acierta.

    Cada simulacion saca un conteo multinomial de v consultas con la etiqueta
    correcta en el indice 0.
    """
    if trials < 1:
        raise ValueError("trials debe ser >= 1")
    _check_majority_args(l, q, v)

    probs = np.full(l, (1.0 - q) / (l - 1))
    probs[0] = q
    probs /= probs.sum()

    hits = 0
    done = 0
    while done < trials:
        size = min(MC_CHUNK, trials - done)
        counts = rng.generator.multinomial(v, probs, size=size)
        top = counts.max(axis=1)
        at_top = counts == top[:, None]
        tied = at_top.sum(axis=1)
        draws = rng.generator.random(size)
        hits += int(np.count_nonzero(at_top[:, 0] & (draws * tied < 1.0)))
        done += size

    return MonteCarloEstimate(mean=hits / trials, trials=trials)


# ---------------------------------------------------------------------------
# Chi-cuadrado
# ---------------------------------------------------------------------------

def chi_square_upper_tail(statistic: float, degrees_of_freedom: int) -> float:
    """P(X >= statistic) para una chi-cuadrado: Q(df / 2, statistic / 2)"""
    if degrees_of_freedom < 1:
        raise ValueError(f"grados de libertad invalidos: {degrees_of_freedom}")
    if statistic < 0.0:
        raise ValueError("el estadistico no puede ser negativo")
    return float(gammaincc(degrees_of_freedom / 2.0, statistic / 2.0))


def chi_square_statistic_from_moments(l: int, n: int, sum_squares: int) -> float:
    """X^2 contra la uniforme = l * sum(c^2) / n - n"""
    return max(0.0, l * sum_squares / n - n)


@lru_cache(maxsize=1 << 16)
def chi_square_p_value_from_moments(l: int, n: int, sum_squares: int) -> float:
    """p-valor a partir de los estadisticos suficientes (l, n, suma de cuadrados)"""
    if n < 1:
        raise EmptyTallyError("La prueba chi-cuadrado necesita al menos una consulta")
    if l < 2:
        raise NoiseModelError(f"Se requieren al menos 2 clases, llegaron {l}")
    return chi_square_upper_tail(chi_square_statistic_from_moments(l, n, sum_squares), l - 1)


def chi_square_statistic(counts: VoteTally) -> float:
    if counts.total < 1:
        raise EmptyTallyError("La prueba chi-cuadrado necesita al menos una consulta")
    return chi_square_statistic_from_moments(counts.classes, counts.total, counts.sum_squares)


def chi_square_p_value(counts: VoteTally) -> float:
    """
    p-valor de la prueba de bondad de ajuste contra la distribucion uniforme.

    Raises:
        EmptyTallyError: Si el conteo no tiene consultas
    """
    if counts.total < 1:
        raise EmptyTallyError("La prueba chi-cuadrado necesita al menos una consulta")
    return chi_square_p_value_from_moments(counts.classes, counts.total, counts.sum_squares)


# ---------------------------------------------------------------------------
# Voto mayoritario
# ---------------------------------------------------------------------------

def majority_vote(tally: VoteTally, rng: RandomStream) -> LabelId:
    """
    Etiqueta con mas votos; los empates se resuelven al azar con rng.

    Raises:
        EmptyTallyError: Si no hay votos
    """
    if tally.total < 1:
        raise EmptyTallyError("No se puede votar sin consultas")
    candidates = tally.max_labels()
    if len(candidates) == 1:
        return candidates[0]
    return candidates[rng.integers(len(candidates))]


# ---------------------------------------------------------------------------
# Curvas y tabla cantidad vs calidad
# ---------------------------------------------------------------------------

def correctness_curves(
    l: int,
    noise_levels: Sequence[float],
    validations: Sequence[int],
    trials: int,
    seed: int
) -> List[CurveRow]:
    """
    Probabilidad de etiqueta correcta para cada (w, v), exacta y Monte Carlo.

    Cada celda usa su propio stream (seed, indice de celda).

    Raises:
        NoiseModelError: Si algun valor de la grilla es invalido (antes de calcular nada)
    """
    for w in noise_levels:
        make_uniform_noise_vector(l, w, 0)
    for v in validations:
        if v < 1:
            raise NoiseModelError(f"Numero de validaciones invalido: {v}")
    if trials < 1:
        raise NoiseModelError(f"trials debe ser >= 1, llego {trials}")

    rows = []
    cell = 0
    for w in noise_levels:
        q = 1.0 - w
        for v in validations:
            exact = strict_majority_prob_exact(l, q, v)
            estimate = majority_prob_mc(l, q, v, trials, derive_stream(seed, cell))
            rows.append(CurveRow(
                l=l,
                w=w,
                v=v,
                strict_prob=exact.strict_prob,
                tie_resolved_prob=exact.tie_resolved_prob,
                mc_mean=estimate.mean,
                mc_stderr=estimate.std_error
            ))
            cell += 1
        logger.debug("Curva calculada", l=l, w=w, cells=len(validations))
    return rows


def tradeoff_table(
    l: int,
    w: float,
    s_max: int,
    validations: Optional[Sequence[int]] = None
) -> List[TradeoffRow]:
    """
    Cantidad vs calidad: cuantos ejemplos y cuantos correctos deja cada v fijo.

    Args:
        l: Numero de clases
        w: Nivel de ruido uniforme
        s_max: Presupuesto de consultas
        validations: Grilla de v (default: grilla estandar)
    """
    make_uniform_noise_vector(l, w, 0)
    if s_max < 1:
        raise NoiseModelError(f"s_max debe ser >= 1, llego {s_max}")

    rows = []
    for v in validations or STANDARD_V_GRID:
        accuracy = strict_majority_prob_exact(l, 1.0 - w, v).tie_resolved_prob
        rows.append(TradeoffRow(l=l, w=w, v=v, examples=s_max // v, label_accuracy=accuracy))
    return rows
