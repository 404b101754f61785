"""Clock abstraction so the simulator and scan loop run on virtual time in
tests and on the monotonic clock in production."""

from __future__ import annotations

import asyncio
import heapq
import itertools
import time
from typing import Protocol


class Clock(Protocol):
    def now_ms(self) -> int: ...

    async def sleep_ms(self, ms: int) -> None: ...


class MonotonicClock:
    """Real clock; time zero is the moment of construction."""

    def __init__(self) -> None:
        self._epoch = time.monotonic()

    def now_ms(self) -> int:
        return int((time.monotonic() - self._epoch) * 1000)

    async def sleep_ms(self, ms: int) -> None:
        await asyncio.sleep(max(ms, 0) / 1000)


class ManualClock:
    """Virtual clock driven explicitly by tests."""

    def __init__(self, start_ms: int = 0) -> None:
        self._now = start_ms
        self._sleepers: list[tuple[int, int, asyncio.Future]] = []
        self._seq = itertools.count()

    def now_ms(self) -> int:
        return self._now

    async def sleep_ms(self, ms: int) -> None:
        if ms <= 0:
            await asyncio.sleep(0)
            return
        fut = asyncio.get_running_loop().create_future()
        heapq.heappush(self._sleepers, (self._now + ms, next(self._seq), fut))
        await fut

    def set_time(self, now_ms: int) -> None:
        """Jump the clock without waking sleepers (for loop-free tests)."""
        self._now = now_ms

    async def advance(self, ms: int) -> None:
        """Move time forward, waking due sleepers and letting them run."""
        self._now += ms
        while self._sleepers and self._sleepers[0][0] <= self._now:
            _, _, fut = heapq.heappop(self._sleepers)
            if not fut.done():
                fut.set_result(None)
        # Give woken coroutines a chance to progress.
        for _ in range(3):
            await asyncio.sleep(0)
