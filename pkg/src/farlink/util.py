"""Small concurrency helpers shared by the pipeline and the server."""
from __future__ import annotations

import threading
import time
from collections import deque
from typing import Any


class BoundedQueue:
    """Bounded FIFO with drop-oldest overflow.

    put() never blocks: when full, the oldest item is evicted and counted.
    get() blocks up to timeout; returns None on timeout or when the queue
    is closed and empty.
    """

    def __init__(self, capacity: int):
        if capacity < 1:
            raise ValueError("capacity must be >= 1")
        self._items: deque[Any] = deque()
        self._capacity = capacity
        self._cond = threading.Condition()
        self._closed = False
        self.dropped = 0

    def put(self, item: Any) -> int:
        """Returns the number of items evicted (0 or 1)."""
        with self._cond:
            if self._closed:
                return 0
            evicted = 0
            if len(self._items) >= self._capacity:
                self._items.popleft()
                self.dropped += 1
                evicted = 1
            self._items.append(item)
            self._cond.notify()
            return evicted

    def get(self, timeout: float | None = None) -> Any | None:
        with self._cond:
            if timeout is None:
                while not self._items and not self._closed:
                    self._cond.wait()
            else:
                deadline = time.monotonic() + timeout
                while not self._items and not self._closed:
                    remaining = deadline - time.monotonic()
                    if remaining <= 0:
                        break
                    self._cond.wait(remaining)
            if self._items:
                return self._items.popleft()
            return None

    def close(self) -> None:
        with self._cond:
            self._closed = True
            self._cond.notify_all()

    def drain(self) -> list[Any]:
        """Empty the queue, returning what was left (shutdown accounting)."""
        with self._cond:
            left = list(self._items)
            self._items.clear()
            return left

    def __len__(self) -> int:
        with self._cond:
            return len(self._items)
