#!/usr/bin/env python3
"""Sweep both appendix estimates and print the most binding rows.

Usage: python scripts/appendix_table.py [n_max] [out.csv]
"""

import sys

from kreisslab.reporting import write_csv
from kreisslab.verify import SWEEP_CSV_HEADER, sweep_appendix, sweep_csv_rows


def main() -> int:
    n_max = int(sys.argv[1]) if len(sys.argv) > 1 else 10_000
    rows = sweep_appendix(2, n_max)
    worst_sup = sorted(rows, key=lambda r: -r.sup_a)[:8]
    worst_v1 = sorted(rows, key=lambda r: -r.v1_a)[:8]
    worst_slack = sorted(rows, key=lambda r: r.a1_min_slack)[:8]
    print(f"n in [2, {n_max}]  ({len(rows)} rows, all pass: "
          f"{all(r.a1_pass and r.a2_pass for r in rows)})")
    print("\nlargest sup_m a_{n,m} (bound 32):")
    for r in worst_sup:
        print(f"  n={r.n:6d}  sup_a={r.sup_a:10.6f}")
    print("\nlargest V^1 (bound 978):")
    for r in worst_v1:
        print(f"  n={r.n:6d}  v1={r.v1_a:10.6f}")
    print("\nsmallest sandwich slack (log domain):")
    for r in worst_slack:
        print(f"  n={r.n:6d}  slack={r.a1_min_slack:.6f}")
    if len(sys.argv) > 2:
        write_csv(sys.argv[2], SWEEP_CSV_HEADER, sweep_csv_rows(rows))
        print(f"\nwrote {sys.argv[2]}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
