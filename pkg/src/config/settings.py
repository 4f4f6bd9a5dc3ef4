from pydantic_settings import BaseSettings
from typing import Optional


class Settings(BaseSettings):
    """Configuracion centralizada de la aplicacion"""

    # Logging
    log_level: str = "INFO"
    log_file: Optional[str] = None

    # Ejecucion
    threads: int = 1
    campaign_batch_size: int = 1024

    # Probabilidades exactas: maximo de conteos a enumerar antes de usar el DP
    enumeration_limit: int = 100_000

    # Salidas
    output_dir: str = "results"

    model_config = {
        "env_file": ".env",
        "env_prefix": "LABEL_BUDGET_",
        "case_sensitive": False
    }


def get_settings() -> Settings:
    """Obtener instancia de configuracion"""
    return Settings()


settings = get_settings()
