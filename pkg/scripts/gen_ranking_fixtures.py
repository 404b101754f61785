#!/usr/bin/env python3
"""Regenerate the shared ranking fixture consumed by both test suites.

The server defines the network ordering; the browser client must re-rank
identically after applying diffs. This emits randomized (input, expected
order) cases derived from the server comparator so the TypeScript tests
never drift from it.
"""

import json
import random
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from awci.model import NetworkView, Ssid, rank_key  # noqa: E402

OUT = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "ranking_cases.json"


def main() -> int:
    rng = random.Random(4242)
    cases = []
    for _ in range(50):
        n = rng.randint(0, 8)
        views = []
        for i in range(n):
            # Deliberately collide signal levels so tie-breaks are exercised.
            views.append(
                NetworkView(
                    ssid=Ssid(f"{rng.choice('abcz')}{rng.randint(0, 9)}-net".encode()),
                    signal_percent=rng.choice([0, 25, 50, 50, 75, 100]),
                    secure=rng.random() < 0.5,
                    bssid_count=rng.randint(1, 3),
                )
            )
        unique = {v.ssid: v for v in views}
        ranked = sorted(unique.values(), key=rank_key)
        shuffled = list(unique.values())
        rng.shuffle(shuffled)
        cases.append(
            {
                "input": [
                    {
                        "ssid": v.ssid.display,
                        "signal": v.signal_percent,
                        "secure": v.secure,
                        "bssids": v.bssid_count,
                    }
                    for v in shuffled
                ],
                "ranked": [v.ssid.display for v in ranked],
            }
        )
    OUT.write_text(json.dumps(cases, indent=1) + "\n")
    print(f"wrote {len(cases)} cases to {OUT}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
