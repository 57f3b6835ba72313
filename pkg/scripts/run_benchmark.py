#!/usr/bin/env python3
"""Run the mixed read/write workload benchmark against an in-memory store.

Defaults to the standard mix at n=1000 with 10 concurrent streams;
prints the per-pattern latency table and the post-run audit result.
"""

import argparse
import sys
import time

from graphled.workload import WorkloadSpec, run_benchmark


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=1000)
    parser.add_argument("--concurrency", type=int, default=10)
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument("--out", help="write the CSV report here")
    args = parser.parse_args()

    spec = WorkloadSpec(n=args.n, concurrency=args.concurrency, seed=args.seed)
    started = time.perf_counter()
    report = run_benchmark(spec)
    elapsed = time.perf_counter() - started

    csv_text = report.to_csv()
    sys.stdout.write(csv_text)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(csv_text)
    print(f"nodes={report.node_count} edges={report.edge_count} "
          f"runs={report.total_runs} wall={elapsed:.1f}s")
    if report.audit_problems:
        print(f"AUDIT FAILED: {report.audit_problems}")
        return 1
    print("audit clean")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
