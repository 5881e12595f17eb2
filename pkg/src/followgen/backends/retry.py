"""Retry policy for flaky backend calls: 3 attempts with exponential backoff."""

from __future__ import annotations

import time
from typing import Callable, TypeVar

from ..errors import BackendError

T = TypeVar("T")

MAX_ATTEMPTS = 3
BASE_DELAY_S = 0.25


def with_retries(
    call: Callable[[], T],
    max_attempts: int = MAX_ATTEMPTS,
    base_delay_s: float = BASE_DELAY_S,
    sleep: Callable[[float], None] = time.sleep,
) -> T:
    """Run the call, retrying retryable BackendErrors with exponential backoff.

    Non-retryable errors surface immediately; the last retryable error
    surfaces after max_attempts.
    """
    attempt = 0
    while True:
        attempt += 1
        try:
            return call()
        except BackendError as err:
            if not err.retryable or attempt >= max_attempts:
                raise
            sleep(base_delay_s * (2 ** (attempt - 1)))
