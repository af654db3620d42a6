from __future__ import annotations

import os
from collections.abc import Callable, Iterable
from concurrent.futures import ThreadPoolExecutor
from typing import TypeVar

from dotenv import load_dotenv

load_dotenv()

LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO")
DEFAULT_SEED = int(os.getenv("HARMAP_SEED", "42"))
MAX_DEGREE = int(os.getenv("HARMAP_MAX_DEGREE", "64"))
DEFAULT_GRID = os.getenv("HARMAP_GRID", "default")

_threads = max(1, int(os.getenv("HARMAP_THREADS", "1")))

T = TypeVar("T")
R = TypeVar("R")


class HarmapError(Exception):
    """Erreur de base; `exit_code` est le code renvoyé par la CLI."""

    exit_code = 1

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


class InputError(HarmapError):
    exit_code = 2


class HypothesisError(HarmapError):
    exit_code = 3


class DomainError(HypothesisError, ValueError):
    pass


class NumericalError(HarmapError):
    exit_code = 1


def set_threads(n: int) -> None:
    global _threads
    if n < 1:
        raise DomainError(f"nombre de threads invalide: {n}")
    _threads = n


def get_threads() -> int:
    return _threads


def parallel_map(fn: Callable[[T], R], items: Iterable[T]) -> list[R]:
    """
    Applique fn à chaque bloc, dans l'ordre des blocs.
    Le résultat ne dépend pas du nombre de threads.
    """
    items = list(items)
    if _threads == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=_threads) as pool:
        return list(pool.map(fn, items))
