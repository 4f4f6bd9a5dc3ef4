"""Modelos del dominio de poker (Texas Hold'em, showdown de dos manos)"""

from dataclasses import dataclass
from enum import Enum, IntEnum
from fractions import Fraction
from typing import NamedTuple, Tuple


RANK_CHARS = "23456789TJQKA"


class Suit(str, Enum):
    SPADES = "s"
    HEARTS = "h"
    DIAMONDS = "d"
    CLUBS = "c"


@dataclass(frozen=True, order=True)
class Card:
    """Carta: rank 2..14 (as alto) y palo"""
    rank: int
    suit: Suit

    def __str__(self) -> str:
        return f"{RANK_CHARS[self.rank - 2]}{self.suit.value}"


class HandCategory(IntEnum):
    HIGH_CARD = 0
    PAIR = 1
    TWO_PAIR = 2
    TRIPS = 3
    STRAIGHT = 4
    FLUSH = 5
    FULL_HOUSE = 6
    QUADS = 7
    STRAIGHT_FLUSH = 8


class HandRank(NamedTuple):
    """Fuerza de una mano: categoria y vector de desempate (orden total)"""
    category: HandCategory
    tiebreak: Tuple[int, ...]


class ShowdownOutcome(str, Enum):
    P1_WINS = "P1_WINS"
    P2_WINS = "P2_WINS"
    TIE = "TIE"


@dataclass(frozen=True)
class Equity:
    """
    Conteos exactos de resultados sobre todos los rivers posibles.

    Los empates cuentan medio para cada jugador en share1/share2.
    """
    wins1: int
    wins2: int
    ties: int

    @property
    def total(self) -> int:
        return self.wins1 + self.wins2 + self.ties

    @property
    def win1(self) -> float:
        return self.wins1 / self.total

    @property
    def win2(self) -> float:
        return self.wins2 / self.total

    @property
    def tie(self) -> float:
        return self.ties / self.total

    @property
    def share1_exact(self) -> Fraction:
        return Fraction(2 * self.wins1 + self.ties, 2 * self.total)

    @property
    def share1(self) -> float:
        return float(self.share1_exact)

    @property
    def share2(self) -> float:
        return float(1 - self.share1_exact)

    def swapped(self) -> "Equity":
        return Equity(wins1=self.wins2, wins2=self.wins1, ties=self.ties)
