"""Periodic scan loop: snapshot, flap-damp, diff, publish.

The pure tick function owns the damping rules; ScanLoop owns the timing and
failure containment around the backend.
"""

from __future__ import annotations

import asyncio
import logging
from dataclasses import dataclass, field
from typing import Callable, Optional

from awci.backends.base import BackendError, WirelessBackend
from awci.clock import Clock, MonotonicClock
from awci.model import (
    EMPTY_SNAPSHOT,
    AccessPoint,
    NetworkDiff,
    NetworkSnapshot,
    NetworkView,
    Ssid,
    dedupe_and_rank,
    diff_snapshots,
    rank_key,
)

log = logging.getLogger(__name__)

# Called with the newly published snapshot and the non-empty diff that
# produced it. Must not block, must not raise.
ScanPublisher = Callable[[NetworkSnapshot, NetworkDiff], None]


@dataclass(frozen=True)
class ScanConfig:
    interval_ms: int = 3000
    removal_grace_scans: int = 2

    def __post_init__(self) -> None:
        if self.interval_ms < 250:
            raise ValueError(f"interval_ms must be >= 250: {self.interval_ms}")
        if self.removal_grace_scans < 1:
            raise ValueError(f"removal_grace_scans must be >= 1: {self.removal_grace_scans}")


@dataclass(frozen=True)
class ScanState:
    """Published snapshot plus per-SSID consecutive-miss counters.

    Every SSID in miss_counts is still present (retained) in current, and
    every count is below the removal grace.
    """

    current: NetworkSnapshot = EMPTY_SNAPSHOT
    miss_counts: dict[Ssid, int] = field(default_factory=dict)


def tick(
    state: ScanState,
    raw: list[AccessPoint],
    config: ScanConfig,
    taken_at_ms: int = 0,
) -> tuple[ScanState, Optional[NetworkDiff]]:
    """Fold one scan result into the published state.

    A network missing from raw is retained at its last-seen values until it
    has been absent for removal_grace_scans consecutive ticks; additions and
    signal changes are never damped.
    """
    candidate = dedupe_and_rank(raw, taken_at_ms=taken_at_ms)
    fresh: dict[Ssid, NetworkView] = {v.ssid: v for v in candidate.networks}

    views = dict(fresh)
    misses: dict[Ssid, int] = {}
    for view in state.current.networks:
        if view.ssid in fresh:
            continue
        count = state.miss_counts.get(view.ssid, 0) + 1
        if count >= config.removal_grace_scans:
            continue  # absent long enough: drop it
        views[view.ssid] = view
        misses[view.ssid] = count

    ranked = tuple(sorted(views.values(), key=rank_key))
    published = NetworkSnapshot(networks=ranked, taken_at_ms=taken_at_ms)
    diff = diff_snapshots(state.current, published)
    new_state = ScanState(current=published, miss_counts=misses)
    return new_state, (None if diff.is_empty() else diff)


class ScanLoop:
    """Drives backend scans every interval_ms (start-to-start) and publishes
    non-empty diffs. A failed scan keeps the previous snapshot."""

    def __init__(
        self,
        backend: WirelessBackend,
        interface: str,
        config: ScanConfig,
        publish: ScanPublisher,
        clock: Optional[Clock] = None,
    ) -> None:
        self._backend = backend
        self._interface = interface
        self._config = config
        self._publish = publish
        self._clock: Clock = clock if clock is not None else MonotonicClock()
        self._state = ScanState()
        self._wake = asyncio.Event()
        self._stopping = False

    @property
    def snapshot(self) -> NetworkSnapshot:
        return self._state.current

    def nudge(self) -> None:
        """Pull the next scan forward (client-requested rescan)."""
        self._wake.set()

    def stop(self) -> None:
        self._stopping = True
        self._wake.set()

    async def run(self) -> None:
        while not self._stopping:
            started_ms = self._clock.now_ms()
            try:
                raw = await self._backend.scan(self._interface)
            except BackendError as exc:
                log.warning("scan failed on %s: %s", self._interface, exc)
                raw = None
            if self._stopping:
                break  # never publish a partial result during shutdown
            if raw is not None:
                self._state, diff = tick(
                    self._state, raw, self._config, taken_at_ms=self._clock.now_ms()
                )
                if diff is not None:
                    self._publish(self._state.current, diff)
            await self._sleep_until(started_ms + self._config.interval_ms)

    async def _sleep_until(self, deadline_ms: int) -> None:
        remaining = deadline_ms - self._clock.now_ms()
        if remaining > 0 and not self._wake.is_set():
            try:
                await asyncio.wait_for(self._wake.wait(), timeout=remaining / 1000)
            except asyncio.TimeoutError:
                return
        self._wake.clear()
