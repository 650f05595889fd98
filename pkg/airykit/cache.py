from __future__ import annotations

import threading
from collections import OrderedDict
from collections.abc import Callable, Hashable
from typing import Generic, TypeVar

T = TypeVar("T")


class MemoCache(Generic[T]):
    """Bounded, lock-protected memo table.

    Values are computed outside the lock; two threads racing on the same key both
    compute and the first stored value wins, so every caller sees the same object.
    """

    def __init__(self, *, max_entries: int = 32) -> None:
        self._max_entries = max_entries
        self._cache: OrderedDict[Hashable, T] = OrderedDict()
        self._lock = threading.Lock()

    def get(self, key: Hashable) -> T | None:
        with self._lock:
            value = self._cache.get(key)
            if value is not None:
                self._cache.move_to_end(key)
            return value

    def put(self, key: Hashable, value: T) -> T:
        with self._lock:
            existing = self._cache.get(key)
            if existing is not None:
                return existing
            self._cache[key] = value
            while len(self._cache) > self._max_entries:
                self._cache.popitem(last=False)
            return value

    def get_or_create(self, key: Hashable, factory: Callable[[], T]) -> T:
        value = self.get(key)
        if value is None:
            value = self.put(key, factory())
        return value

    def clear(self) -> None:
        with self._lock:
            self._cache.clear()

    def __len__(self) -> int:
        with self._lock:
            return len(self._cache)
