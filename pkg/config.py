"""
================================================================================
CONFIGURACIÓN - Parámetros globales de GH-Lab
================================================================================

Centraliza los límites y tolerancias que comparten todos los módulos.

Los valores por defecto se pueden sobrescribir con variables de entorno
(o con un fichero .env en la raíz del proyecto):

    GHLAB_MAX_POINTS   Máximo de puntos por espacio construido (4096)
    GHLAB_GH_BUDGET    Nodos del branch-and-bound de gh_exact (200000)
    GHLAB_LOG_LEVEL    Nivel de logging de la CLI (INFO)

Uso:
    from config import get_settings
    cap = get_settings().max_points

Autor: GH-Lab
Versión: 1.0
================================================================================
"""

import os
import logging
from dataclasses import dataclass

from dotenv import load_dotenv

logger = logging.getLogger(__name__)

load_dotenv()

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class Settings:
    """Límites y tolerancias activos"""
    max_points: int = 4096
    triangle_rtol: float = 1e-9
    isometry_tol: float = 1e-9
    exact_doubling_max_points: int = 15
    isometry_max_points: int = 10
    enumeration_max_pairs: int = 20
    gh_node_budget: int = 200_000
    local_restarts: int = 32
    telescope_depth: int = 8
    cantor_max_depth: int = 12
    log_level: str = "INFO"


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        logger.warning(f"{name}={raw!r} no es un entero, se usa {default}")
        return default
    if value <= 0:
        logger.warning(f"{name}={value} debe ser positivo, se usa {default}")
        return default
    return value


def get_settings() -> Settings:
    """
    Lee la configuración actual.

    Se relee el entorno en cada llamada: los tests pueden cambiar
    GHLAB_MAX_POINTS con monkeypatch sin reiniciar el proceso.
    """
    return Settings(
        max_points=_env_int("GHLAB_MAX_POINTS", Settings.max_points),
        gh_node_budget=_env_int("GHLAB_GH_BUDGET", Settings.gh_node_budget),
        log_level=os.environ.get("GHLAB_LOG_LEVEL", Settings.log_level).upper(),
    )
