"""Print stabilizer-state counts per group, next to the brute-force oracle where it is cheap.

    python3 scripts/count_table.py Z2 Z3 Z4 Z2xZ2 Z6
    python3 scripts/count_table.py --max-order 12 --oracle-limit 8
"""

import argparse
import itertools
import time

from stabforge.groups import enumerate_subgroups, make_group, parse_group
from stabforge.oracle import brute_force_count
from stabforge.stabilizer import count_states


def groups_up_to(n: int):
    # invariant-factor lists d1 | d2 | ... with product <= n
    out = []

    def grow(orders, prod):
        if orders:
            out.append(make_group(orders))
        last = orders[-1] if orders else 1
        for d in itertools.count(2):
            if prod * d > n:
                break
            if orders and d % last:
                continue
            grow(orders + [d], prod * d)

    grow([], 1)
    return sorted(out, key=lambda A: (A.N, A.orders))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("groups", nargs="*")
    ap.add_argument("--max-order", type=int, default=12)
    ap.add_argument("--oracle-limit", type=int, default=8, help="largest N checked by brute force")
    args = ap.parse_args(argv)

    groups = [parse_group(s) for s in args.groups] or groups_up_to(args.max_order)
    print(f"{'group':<16}{'N':>4}{'subgroups':>11}{'states':>9}{'oracle':>9}{'secs':>8}")
    bad = 0
    for A in groups:
        t0 = time.perf_counter()
        n = count_states(A)
        dt = time.perf_counter() - t0
        ref = brute_force_count(A) if A.N <= args.oracle_limit else None
        bad += ref is not None and ref != n
        flag = "-" if ref is None else str(ref) + ("" if ref == n else " !")
        print(f"{str(A):<16}{A.N:>4}{len(enumerate_subgroups(A)):>11}{n:>9}{flag:>9}{dt:>8.2f}")
    return 1 if bad else 0


if __name__ == "__main__":
    raise SystemExit(main())
