"""Print the L(m, n) value table next to its closed-form entries."""

import sys

from gaussinv.families import TABLE1_EXPECTED, table1_report


def main(max_param: int = 5) -> int:
    rows = table1_report(max_param)
    bad = 0
    print(f"{'m':>3} {'n':>3}  {'formula':<16} {'value':>6} {'expected':>9}")
    for m, n, name, value in rows:
        want = TABLE1_EXPECTED[name](m, n)
        bad += value != want
        print(f"{m:>3} {n:>3}  {name:<16} {str(value):>6} {want:>9}")
    print(f"{len(rows)} entries, {bad} mismatches")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main(int(sys.argv[1]) if len(sys.argv) > 1 else 5))
