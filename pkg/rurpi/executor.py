import asyncio
import threading
from collections.abc import Callable
from concurrent.futures import Executor, ProcessPoolExecutor, ThreadPoolExecutor
from functools import partial
from typing import TypeVar

from .config import ExecutorKind, get_settings

T = TypeVar("T")

_executors: dict[str, Executor] = {}
_executor_lock = threading.Lock()


def get_executor(kind: ExecutorKind | None = None, workers: int | None = None) -> Executor:
    """Shared worker pool for ``kind``, created on first use and never replaced.

    The pool is sized once, from the larger of ``Settings.threads`` and the first
    caller's ``workers``. A later caller asking for more workers gets the same pool;
    its batches queue on the existing workers.
    """
    settings = get_settings()
    kind = kind or settings.executor
    executor = _executors.get(kind)
    if executor is None:
        with _executor_lock:
            executor = _executors.get(kind)
            if executor is None:
                width = max(settings.threads, workers or 1)
                pool = ProcessPoolExecutor if kind == "process" else ThreadPoolExecutor
                executor = _executors[kind] = pool(max_workers=width)
    return executor


async def run_blocking(
    executor: Executor | None, fn: Callable[..., T], *args, **kwargs
) -> T:
    loop = asyncio.get_running_loop()
    return await loop.run_in_executor(executor, partial(fn, *args, **kwargs))


def shutdown_executor() -> None:
    with _executor_lock:
        pools = list(_executors.values())
        _executors.clear()
    for pool in pools:
        pool.shutdown(wait=True)
