"""Shared strategies and independent oracles used across the suite."""

from __future__ import annotations

import random

from hypothesis import strategies as st

from awci.model import (
    AccessPoint,
    NetworkDiff,
    NetworkSnapshot,
    NetworkView,
    Security,
    Ssid,
    rank_key,
)

# ---------------------------------------------------------------------------
# Oracles
# ---------------------------------------------------------------------------


def apply_diff(prev: NetworkSnapshot, diff: NetworkDiff, taken_at_ms: int = 0) -> NetworkSnapshot:
    """Patch oracle: apply added/removed/changed to prev, then re-rank.

    Deliberately independent of diff_snapshots internals.
    """
    views = {v.ssid: v for v in prev.networks}
    for ssid in diff.removed:
        views.pop(ssid, None)
    for view in diff.added:
        views[view.ssid] = view
    for view in diff.changed:
        views[view.ssid] = view
    ranked = sorted(views.values(), key=rank_key)
    return NetworkSnapshot(networks=tuple(ranked), taken_at_ms=taken_at_ms)


def brute_force_groups(aps: list[AccessPoint]) -> dict[bytes, list[AccessPoint]]:
    """Naive group-by used to cross-check dedupe_and_rank."""
    out: dict[bytes, list[AccessPoint]] = {}
    for ap in aps:
        out.setdefault(ap.ssid.raw, []).append(ap)
    return out


# ---------------------------------------------------------------------------
# Hypothesis strategies
# ---------------------------------------------------------------------------

ssids = st.binary(min_size=1, max_size=32).map(Ssid)

# A small pool so generated AP lists actually share SSIDs.
_POOL = [Ssid(f"net-{i}".encode()) for i in range(8)]


def _bssid_from_int(n: int) -> str:
    octets = [(n >> (8 * i)) & 0xFF for i in range(5, -1, -1)]
    return ":".join(f"{o:02x}" for o in octets)


bssids = st.integers(min_value=0, max_value=2**48 - 1).map(_bssid_from_int)

access_points = st.builds(
    AccessPoint,
    ssid=st.one_of(st.sampled_from(_POOL), ssids),
    bssid=bssids,
    signal_dbm=st.integers(min_value=-100, max_value=-10),
    security=st.sampled_from(list(Security)),
    channel=st.integers(min_value=1, max_value=165),
)

network_views = st.builds(
    NetworkView,
    ssid=ssids,
    signal_percent=st.integers(min_value=0, max_value=100),
    secure=st.booleans(),
    bssid_count=st.integers(min_value=1, max_value=6),
)


def random_snapshot(rng: random.Random, pool: list[Ssid], taken_at_ms: int = 0) -> NetworkSnapshot:
    """Seeded snapshot generator for bulk randomized checks."""
    chosen = rng.sample(pool, k=rng.randint(0, len(pool)))
    views = [
        NetworkView(
            ssid=ssid,
            signal_percent=rng.randint(0, 100),
            secure=rng.random() < 0.5,
            bssid_count=rng.randint(1, 4),
        )
        for ssid in chosen
    ]
    views.sort(key=rank_key)
    return NetworkSnapshot(networks=tuple(views), taken_at_ms=taken_at_ms)
