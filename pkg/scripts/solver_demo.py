"""Solve for arity-1 invariants and show where the linking number lands."""

import sys

from gaussinv.bracket import evaluate
from gaussinv.diagram import serialize
from gaussinv.families import l_mn, load_builtin, twist_chain
from gaussinv.lab import formula_of, in_span, solve, vector_of


def main(samples: int = 300, seed: int = 1) -> int:
    report = solve(1, samples, seed, verify_walks=5)
    print(f"kernel dimension {len(report.vectors)} from {samples} move samples")
    for i, (v, status) in enumerate(zip(report.vectors, report.status)):
        print(f"vector {i} ({status}):")
        for c, p in formula_of(v, report.basis).terms:
            print(f"  {str(c):>4}  {serialize(p).replace(chr(10), ' | ')}")
    lk = load_builtin("lk")["lk"]
    print("lk in span:", in_span(report.vectors, vector_of(lk, report.basis)))
    for d, label in ((twist_chain(3, -1), "twist_chain_3_-1"), (l_mn(3, 5), "L_3_5")):
        print(f"lk({label}) = {evaluate(lk, d)}")
    return 0


if __name__ == "__main__":
    sys.exit(main(*(int(a) for a in sys.argv[1:3])))
