"""Logging estructurado para campanas y comandos del CLI"""

import logging
import sys
from pathlib import Path
from typing import List, Optional

import structlog


_logger_configured = False


def _build_handlers(log_file: Optional[str]) -> List[logging.Handler]:
    # stdout es de las tablas del CLI; los logs van a stderr
    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if log_file:
        log_path = Path(log_file)
        log_path.parent.mkdir(parents=True, exist_ok=True)
        handlers.append(logging.FileHandler(log_path, encoding='utf-8'))
    return handlers


def setup_logging(log_file: Optional[str] = None, log_level: str = "INFO") -> None:
    """Configurar structlog sobre logging estandar (solo la primera vez)"""
    global _logger_configured

    if _logger_configured:
        return

    level = logging.getLevelName(log_level.upper())
    if not isinstance(level, int):
        level = logging.INFO

    logging.basicConfig(level=level, format="%(message)s", handlers=_build_handlers(log_file))

    structlog.configure(
        processors=[
            structlog.stdlib.filter_by_level,
            structlog.stdlib.add_logger_name,
            structlog.stdlib.add_log_level,
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.processors.StackInfoRenderer(),
            structlog.processors.format_exc_info,
            structlog.processors.UnicodeDecoder(),
            # Sin colores si stderr no es terminal (archivo de log, pytest)
            structlog.dev.ConsoleRenderer(colors=sys.stderr.isatty() and not log_file)
        ],
        wrapper_class=structlog.stdlib.BoundLogger,
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        cache_logger_on_first_use=True,
    )

    _logger_configured = True


def set_verbosity(verbose: bool) -> None:
    """--verbose sube a DEBUG; sin el, la consola muestra solo advertencias"""
    from src.config.settings import settings

    setup_logging(settings.log_file, settings.log_level)
    root = logging.getLogger()
    root.setLevel(logging.DEBUG if verbose else max(logging.WARNING, root.level))


def get_logger(name: str = "label_budget") -> structlog.stdlib.BoundLogger:
    """Logger con nombre; configura el logging en el primer uso"""
    from src.config.settings import settings

    setup_logging(settings.log_file, settings.log_level)
    return structlog.get_logger(name)
