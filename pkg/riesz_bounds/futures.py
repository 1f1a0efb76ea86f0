#
# Copyright (C) 2023 Intel Corporation
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#    http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
#

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor, _base, as_completed
from contextlib import contextmanager
from typing import Callable, Dict, Generator, List, Optional, Sequence, TypeVar

import psutil

T = TypeVar("T")
R = TypeVar("R")

THREADS_ENV_VAR = "RIESZ_BOUNDS_THREADS"
MAX_DEFAULT_THREADS = 8


def default_thread_count() -> int:
    """Worker count from $RIESZ_BOUNDS_THREADS, else the number of logical CPUs (capped)."""
    value = os.environ.get(THREADS_ENV_VAR)
    if value:
        try:
            return max(1, int(value))
        except ValueError:
            raise ValueError(f"{THREADS_ENV_VAR} must be a positive integer, got {value!r}") from None
    return max(1, min(psutil.cpu_count() or 1, MAX_DEFAULT_THREADS))


@contextmanager
def wrap_thread_pool(pool: ThreadPoolExecutor) -> Generator[ThreadPoolExecutor, None, None]:
    try:
        yield pool
    except _base.TimeoutError as e:
        # concurrent.futures.TimeoutError only became the builtin TimeoutError in 3.11
        raise TimeoutError(*e.args) from e
    finally:
        pool.shutdown(wait=True)


def map_in_parallel(
    func: Callable[[T], R], items: Sequence[T], max_threads: Optional[int] = None, timeout: Optional[float] = None
) -> List[R]:
    """
    Apply `func` to every item on a thread pool and return the results in input order.

    Completion order never leaks into the result, so reductions over it are deterministic for any thread count.
    The first exception raised by `func` is re-raised.
    """
    if not items:
        return []
    threads = max_threads if max_threads is not None else default_thread_count()
    if threads <= 1 or len(items) == 1:
        return [func(item) for item in items]

    results: Dict[int, R] = {}
    with wrap_thread_pool(ThreadPoolExecutor(max_workers=min(len(items), threads))) as pool:
        futures = {pool.submit(func, item): index for index, item in enumerate(items)}
        for completed in as_completed(futures, timeout):
            results[futures[completed]] = completed.result()
    return [results[index] for index in range(len(items))]
