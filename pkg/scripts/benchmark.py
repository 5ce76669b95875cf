#!/usr/bin/env python3
"""Times the packed metric kernels on the compiled and pure lanes.

The lane is fixed at import time, so each lane gets a fresh interpreter.
Lanes must agree exactly on every result; the table reports wall time
and the compiled lane's speedup.
"""

import argparse
import json
import os
import subprocess
import sys
import time

WORKLOADS = [
    ("hull_pair_sweep", {"j": 1, "radius": 6}),
    ("hull_pair_sweep", {"j": 2, "radius": 4}),
    ("band_pair_sweep", {"j": 2, "radius": 4}),
    ("band_pair_sweep", {"j": 3, "radius": 3}),
]


def run_lane(pure: bool) -> dict:
    env = dict(os.environ, QUASICOP_PURE="1" if pure else "0")
    out = subprocess.run(
        [sys.executable, os.path.abspath(__file__), "--worker"],
        env=env, capture_output=True, text=True, check=True)
    return json.loads(out.stdout)


def worker() -> None:
    import quasicop.lampcore as lc

    rows = []
    for name, kwargs in WORKLOADS:
        fn = getattr(lc, name)
        start = time.perf_counter()
        ball, pairs, tail = fn(**kwargs)
        elapsed = time.perf_counter() - start
        # mismatch count for hull sweeps, gap histogram for band sweeps
        digest = tail if isinstance(tail, int) else sorted(tail.items())
        rows.append({"name": name, "kwargs": kwargs, "seconds": elapsed,
                     "pairs": pairs, "digest": digest})
    json.dump({"lane": lc.IMPLEMENTATION, "rows": rows}, sys.stdout)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--worker", action="store_true", help=argparse.SUPPRESS)
    args = parser.parse_args()
    if args.worker:
        worker()
        return 0

    fast = run_lane(pure=False)
    pure = run_lane(pure=True)
    if fast["lane"] == pure["lane"]:
        print(f"compiled lane unavailable; comparing {pure['lane']} "
              f"against itself", file=sys.stderr)

    header = (f"{'workload':32} {'pairs':>12} {fast['lane']:>10} "
              f"{pure['lane']:>10} {'speedup':>8}")
    print(header)
    print("-" * len(header))
    status = 0
    for row_fast, row_pure in zip(fast["rows"], pure["rows"]):
        call = ", ".join(f"{k}={v}" for k, v in row_fast["kwargs"].items())
        label = f"{row_fast['name']}({call})"
        if row_fast["digest"] != row_pure["digest"]:
            print(f"{label:32} lanes disagree", file=sys.stderr)
            status = 1
            continue
        ratio = (row_pure["seconds"] / row_fast["seconds"]
                 if row_fast["seconds"] > 0 else float("inf"))
        print(f"{label:32} {row_fast['pairs']:>12,} "
              f"{row_fast['seconds']:>9.3f}s {row_pure['seconds']:>9.3f}s "
              f"{ratio:>7.1f}x")
    return status


if __name__ == "__main__":
    sys.exit(main())
