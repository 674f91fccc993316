"""
Worker pool helpers.

Parallel work is always collected in input order and reduced afterwards, so
results never depend on the worker count.
"""

import logging
import os
from collections.abc import Callable, Iterable
from concurrent.futures import ThreadPoolExecutor
from typing import TypeVar

import psutil

from treefit.config import TestSettings, TreefitSettings, get_config, is_testing

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")

_active_settings: TreefitSettings | TestSettings | None = None


def use_settings(settings: TreefitSettings | TestSettings | None) -> None:
    """Install the settings used by library calls (None resets to lazy loading)."""
    global _active_settings  # noqa: PLW0603
    _active_settings = settings


def active_settings() -> TreefitSettings | TestSettings:
    """Installed settings, loading them from the environment on first use."""
    global _active_settings  # noqa: PLW0603
    if _active_settings is None:
        _active_settings = get_config(testing=is_testing())
    return _active_settings


def resolve_workers(settings: TreefitSettings | TestSettings | None = None) -> int:
    """
    Number of worker threads.

    THREADS > 0 is taken as is; 0 means the physical core count (logical
    count as fallback).
    """
    settings = settings or active_settings()
    if settings.THREADS > 0:
        return settings.THREADS
    return psutil.cpu_count(logical=False) or os.cpu_count() or 1


def block_elements() -> int:
    """Element budget of one quadruple block."""
    return active_settings().BLOCK_ELEMENTS


def ordered_map(fn: Callable[[T], R], items: Iterable[T], workers: int | None = None) -> list[R]:
    """
    Apply `fn` to every item, possibly in threads, returning results in input order.

    Args:
        fn: Pure function of one item.
        items: Work items.
        workers: Thread count (defaults to `resolve_workers()`).

    Returns:
        List of results aligned with `items`.

    """
    items = list(items)
    workers = resolve_workers() if workers is None else workers
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=min(workers, len(items))) as pool:
        return list(pool.map(fn, items))
