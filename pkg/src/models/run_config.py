"""Configuracion de corrida (archivo JSON + overrides del CLI)"""

import json
from pathlib import Path
from typing import Annotated, Any, Dict, List, Literal, Mapping, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, ValidationInfo, field_validator, model_validator

from src.config.settings import settings
from src.models.poker import Card
from src.utils.exceptions import CardError, ConfigError, NoiseModelError, PolicySpecError
from src.utils.noise_model import make_uniform_noise_vector


MAX_SEED = 2 ** 64 - 1


class UniformOracleConfig(BaseModel):
    """Oracle con ruido uniforme sobre l clases"""
    model_config = ConfigDict(extra="forbid")

    kind: Literal["uniform"]
    l: int = Field(10, ge=2)
    w: float = Field(ge=0.0)

    @model_validator(mode="after")
    def check_noise(self) -> "UniformOracleConfig":
        try:
            make_uniform_noise_vector(self.l, self.w, 0)
        except NoiseModelError as e:
            raise ValueError(str(e)) from None
        return self


class PokerOracleConfig(BaseModel):
    """Oracle binario de showdown; cartas como texto separado por espacios"""
    model_config = ConfigDict(extra="forbid")

    kind: Literal["poker"]
    p1: str
    p2: str
    flop: str

    @field_validator("p1", "p2", "flop")
    @classmethod
    def check_cards(cls, value: str, info: ValidationInfo) -> str:
        from src.services.poker_service import parse_cards

        expected = 3 if info.field_name == "flop" else 2
        try:
            cards = parse_cards(value)
        except CardError as e:
            raise ValueError(str(e)) from None
        if len(cards) != expected:
            raise ValueError(f"se esperaban {expected} cartas, llegaron {len(cards)}")
        return " ".join(str(card) for card in cards)

    @model_validator(mode="after")
    def check_distinct(self) -> "PokerOracleConfig":
        cards = self.cards()
        every = cards[0] + cards[1] + cards[2]
        if len(set(every)) != len(every):
            raise ValueError("las 7 cartas deben ser distintas")
        return self

    def cards(self) -> Tuple[List[Card], List[Card], List[Card]]:
        from src.services.poker_service import parse_cards

        return parse_cards(self.p1), parse_cards(self.p2), parse_cards(self.flop)


OracleConfig = Annotated[Union[UniformOracleConfig, PokerOracleConfig], Field(discriminator="kind")]


class RunConfig(BaseModel):
    """
    Configuracion completa de una simulacion.

    Todos los campos se validan juntos; los errores se reportan con su
    ubicacion (p. ej. "oracle.uniform.w") antes de hacer cualquier trabajo.
    """
    model_config = ConfigDict(extra="forbid")

    oracle: OracleConfig
    policy: str
    s_max: int = Field(ge=1)
    examples: int = Field(ge=1)
    seed: int = Field(ge=0, le=MAX_SEED)
    out_dir: str = Field(default_factory=lambda: settings.output_dir)
    threads: int = Field(default_factory=lambda: settings.threads, ge=1)

    @field_validator("policy")
    @classmethod
    def check_policy(cls, value: str) -> str:
        from src.services.policy_service import parse_policy

        try:
            parse_policy(value)
        except PolicySpecError as e:
            raise ValueError(str(e)) from None
        return value

    @classmethod
    def from_mapping(cls, data: Mapping[str, Any], overrides: Optional[Mapping[str, Any]] = None) -> "RunConfig":
        """
        Construir desde un dict; los overrides con valor None se ignoran.

        Raises:
            ConfigError: Con todos los problemas encontrados
        """
        merged: Dict[str, Any] = dict(data)
        for key, value in (overrides or {}).items():
            if value is not None:
                merged[key] = value
        try:
            return cls.model_validate(merged)
        except ValidationError as e:
            raise ConfigError([
                (".".join(str(part) for part in error["loc"]) or "<root>", error["msg"])
                for error in e.errors()
            ]) from None

    @staticmethod
    def read_file(path: Union[str, Path]) -> Dict[str, Any]:
        """
        Leer el JSON crudo, sin validar campos (los overrides se aplican despues).

        Raises:
            ConfigError: Si el archivo no existe o no es un objeto JSON valido
        """
        config_path = Path(path)
        try:
            data = json.loads(config_path.read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise ConfigError([(str(config_path), "archivo no encontrado")]) from None
        except json.JSONDecodeError as e:
            raise ConfigError([(str(config_path), f"JSON invalido: {e.msg} (linea {e.lineno})")]) from None
        if not isinstance(data, dict):
            raise ConfigError([(str(config_path), "se esperaba un objeto JSON")])
        return data

    @classmethod
    def load(cls, path: Union[str, Path], overrides: Optional[Mapping[str, Any]] = None) -> "RunConfig":
        """Leer y validar un archivo JSON de configuracion"""
        return cls.from_mapping(cls.read_file(path), overrides)
