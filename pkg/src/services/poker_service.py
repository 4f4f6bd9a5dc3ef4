"""Showdown de Texas Hold'em: evaluacion de manos, equity exacta y oracle por river muestreado"""

import itertools
from collections import Counter
from typing import List, Sequence, Tuple

from src.models.labeling import Example, LabelId, ProbabilityVector, VoteTally
from src.models.poker import (
    RANK_CHARS,
    Card,
    Equity,
    HandCategory,
    HandRank,
    ShowdownOutcome,
    Suit,
)
from src.utils.exceptions import BalancedMatchupError, CardError, NoiseModelError
from src.utils.logger import get_logger
from src.utils.random_streams import RandomStream


RIVER_CARDS = 2
WHEEL = [14, 5, 4, 3, 2]

DECK: Tuple[Card, ...] = tuple(
    Card(rank, suit) for rank in range(2, 15) for suit in Suit
)

logger = get_logger("poker")


def parse_card(text: str) -> Card:
    """
    Parsear una carta de 2 caracteres, p. ej. "Qh" o "As".

    Raises:
        CardError: Si el rank o el palo no son validos
    """
    if not isinstance(text, str) or len(text) != 2:
        raise CardError(f"Carta mal formada: {text!r} (se esperan 2 caracteres, p. ej. 'Ah')")
    rank_char, suit_char = text[0], text[1]
    if rank_char not in RANK_CHARS:
        raise CardError(f"Rank invalido en {text!r}: usar uno de {RANK_CHARS}")
    try:
        suit = Suit(suit_char)
    except ValueError:
        raise CardError(f"Palo invalido en {text!r}: usar s, h, d o c") from None
    return Card(RANK_CHARS.index(rank_char) + 2, suit)


def parse_cards(text: str) -> List[Card]:
    """Parsear cartas separadas por espacios ("Qh Js")"""
    return [parse_card(token) for token in text.split()]


def format_cards(cards: Sequence[Card]) -> str:
    return " ".join(str(card) for card in cards)


def _check_distinct(cards: Sequence[Card]) -> None:
    if len(set(cards)) != len(cards):
        repeated = [str(c) for c, n in Counter(cards).items() if n > 1]
        raise CardError(f"Cartas repetidas: {', '.join(repeated)}")


def _check_matchup(p1: Sequence[Card], p2: Sequence[Card], flop: Sequence[Card]) -> None:
    if len(p1) != 2 or len(p2) != 2:
        raise CardError("Cada mano debe tener exactamente 2 cartas")
    if len(flop) != 3:
        raise CardError("El flop debe tener exactamente 3 cartas")
    _check_distinct(list(p1) + list(p2) + list(flop))


# ---------------------------------------------------------------------------
# Evaluacion de manos
# ---------------------------------------------------------------------------

def evaluate5(cards: Sequence[Card]) -> HandRank:
    """Fuerza de una mano de exactamente 5 cartas"""
    ranks = sorted((c.rank for c in cards), reverse=True)
    suit = cards[0].suit
    flush = all(c.suit == suit for c in cards)
    counts = Counter(ranks)
    groups = sorted(counts.items(), key=lambda rc: (rc[1], rc[0]), reverse=True)
    shape = tuple(n for _, n in groups)
    ordered = tuple(r for r, _ in groups)

    straight_top = 0
    if len(counts) == 5:
        if ranks[0] - ranks[4] == 4:
            straight_top = ranks[0]
        elif ranks == WHEEL:
            straight_top = 5

    if straight_top and flush:
        return HandRank(HandCategory.STRAIGHT_FLUSH, (straight_top,))
    if shape == (4, 1):
        return HandRank(HandCategory.QUADS, ordered)
    if shape == (3, 2):
        return HandRank(HandCategory.FULL_HOUSE, ordered)
    if flush:
        return HandRank(HandCategory.FLUSH, tuple(ranks))
    if straight_top:
        return HandRank(HandCategory.STRAIGHT, (straight_top,))
    if shape == (3, 1, 1):
        return HandRank(HandCategory.TRIPS, ordered)
    if shape == (2, 2, 1):
        return HandRank(HandCategory.TWO_PAIR, ordered)
    if shape == (2, 1, 1, 1):
        return HandRank(HandCategory.PAIR, ordered)
    return HandRank(HandCategory.HIGH_CARD, tuple(ranks))


def _best_of(cards: Sequence[Card]) -> HandRank:
    return max(evaluate5(combo) for combo in itertools.combinations(cards, 5))


def evaluate7(cards: Sequence[Card]) -> HandRank:
    """
    Mejor mano de 5 entre los 21 subconjuntos de 7 cartas.

    Raises:
        CardError: Si no son 7 cartas distintas
    """
    if len(cards) != 7:
        raise CardError(f"evaluate7 necesita 7 cartas, llegaron {len(cards)}")
    _check_distinct(cards)
    return _best_of(cards)


def showdown(p1: Sequence[Card], p2: Sequence[Card], board: Sequence[Card]) -> ShowdownOutcome:
    """Resultado con el board completo de 5 cartas"""
    rank1 = _best_of(list(p1) + list(board))
    rank2 = _best_of(list(p2) + list(board))
    if rank1 > rank2:
        return ShowdownOutcome.P1_WINS
    if rank2 > rank1:
        return ShowdownOutcome.P2_WINS
    return ShowdownOutcome.TIE


def remaining_deck(known: Sequence[Card]) -> List[Card]:
    """Cartas no vistas, en orden canonico del mazo"""
    used = set(known)
    return [card for card in DECK if card not in used]


# ---------------------------------------------------------------------------
# Equity exacta y muestreo
# ---------------------------------------------------------------------------

def exact_showdown_equity(p1: Sequence[Card], p2: Sequence[Card], flop: Sequence[Card]) -> Equity:
    """
    Enumera los C(45, 2) = 990 rivers posibles y cuenta victorias y empates.

    Raises:
        CardError: Si hay cartas repetidas o cantidades incorrectas
    """
    _check_matchup(p1, p2, flop)
    wins1 = wins2 = ties = 0
    for river in itertools.combinations(remaining_deck(list(p1) + list(p2) + list(flop)), RIVER_CARDS):
        outcome = showdown(p1, p2, list(flop) + list(river))
        if outcome is ShowdownOutcome.P1_WINS:
            wins1 += 1
        elif outcome is ShowdownOutcome.P2_WINS:
            wins2 += 1
        else:
            ties += 1

    equity = Equity(wins1=wins1, wins2=wins2, ties=ties)
    logger.debug(
        "Equity exacta calculada",
        p1=format_cards(p1),
        p2=format_cards(p2),
        flop=format_cards(flop),
        wins1=wins1,
        wins2=wins2,
        ties=ties
    )
    return equity


def draw_river(deck: Sequence[Card], rng: RandomStream) -> Tuple[Card, Card]:
    """Par no ordenado uniforme de las cartas restantes"""
    first, second = rng.generator.choice(len(deck), size=RIVER_CARDS, replace=False)
    return deck[int(first)], deck[int(second)]


def sample_showdown(
    p1: Sequence[Card],
    p2: Sequence[Card],
    flop: Sequence[Card],
    rng: RandomStream
) -> ShowdownOutcome:
    """Completar el board con un river aleatorio legal y ver quien gana"""
    _check_matchup(p1, p2, flop)
    deck = remaining_deck(list(p1) + list(p2) + list(flop))
    return showdown(p1, p2, list(flop) + list(draw_river(deck, rng)))


# ---------------------------------------------------------------------------
# Oracle binario
# ---------------------------------------------------------------------------

class PokerOracle:
    """
    Oracle binario: etiqueta 0 si gana p1 y 1 si gana p2 en un river muestreado.

    Los empates se resuelven con una moneda del mismo stream, de modo que la
    probabilidad de cada etiqueta es la equity con empates repartidos a medias.
    """

    def __init__(self, p1: Sequence[Card], p2: Sequence[Card], flop: Sequence[Card]):
        _check_matchup(p1, p2, flop)
        self.p1 = tuple(p1)
        self.p2 = tuple(p2)
        self.flop = tuple(flop)
        self._deck = remaining_deck(self.p1 + self.p2 + self.flop)
        self.equity = exact_showdown_equity(self.p1, self.p2, self.flop)

        if self.equity.wins1 == self.equity.wins2:
            raise BalancedMatchupError(
                f"{format_cards(p1)} vs {format_cards(p2)} en {format_cards(flop)} "
                "esta exactamente equilibrado: no hay etiqueta correcta"
            )
        self.correct_label: LabelId = 0 if self.equity.wins1 > self.equity.wins2 else 1
        self._vector = ProbabilityVector(
            probs=(self.equity.share1, self.equity.share2),
            correct_index=self.correct_label
        )

    def classes(self) -> int:
        return 2

    def probability_vector(self, example: Example) -> ProbabilityVector:
        return self._vector

    def example(self, example_id: int) -> Example:
        """Ejemplo de este enfrentamiento con su etiqueta correcta"""
        return Example(id=example_id, true_label=self.correct_label)

    def query(self, example: Example, rng: RandomStream) -> LabelId:
        if not 0 <= example.true_label < 2:
            raise NoiseModelError(f"Etiqueta {example.true_label} fuera de rango para 2 clases")
        board = list(self.flop) + list(draw_river(self._deck, rng))
        outcome = showdown(self.p1, self.p2, board)
        if outcome is ShowdownOutcome.P1_WINS:
            return 0
        if outcome is ShowdownOutcome.P2_WINS:
            return 1
        return 0 if rng.random() < 0.5 else 1

    def query_n(self, example: Example, n: int, rng: RandomStream) -> VoteTally:
        if n < 1:
            raise ValueError("n debe ser >= 1")
        return VoteTally.from_labels(2, (self.query(example, rng) for _ in range(n)))


def poker_oracle(p1: Sequence[Card], p2: Sequence[Card], flop: Sequence[Card]) -> PokerOracle:
    """Construir el oracle binario del enfrentamiento (falla si esta equilibrado)"""
    return PokerOracle(p1, p2, flop)
