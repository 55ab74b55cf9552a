from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gaussinv.bracket import evaluate
from gaussinv.families import hopf, l_mn, load_builtin
from gaussinv.lab import (
    PRIME,
    ConstraintMatrix,
    _nullspace_exact,
    _nullspace_modular,
    _rational_reconstruct,
    build_constraints,
    corpus,
    corpus_seeds,
    enumerate_diagrams,
    enumerate_patterns,
    find_violation,
    formula_of,
    in_span,
    order_check,
    satisfies,
    solve,
    solve_nullspace,
    vector_of,
)


def test_pattern_counts():
    assert len(enumerate_patterns(1)) == 8
    assert len(enumerate_patterns(1, mixed_only=True)) == 4
    assert len(enumerate_patterns(2)) == 82
    assert len(enumerate_patterns(3, mixed_only=True)) == 62
    assert len(enumerate_diagrams(2)) == 1 + 82  # patterns cover arity <= k


def test_patterns_are_distinct_and_signed():
    from gaussinv.bracket import pattern_key

    ps = enumerate_patterns(2)
    assert len({pattern_key(p) for p in ps}) == len(ps)
    assert all(s in (1, -1) for p in ps for _, s in p.signs)


def test_empty_matrix_gives_unit_vectors():
    basis = enumerate_patterns(1)
    out = solve_nullspace(ConstraintMatrix(basis))
    assert sorted(tuple(v) for v in out) == sorted(
        tuple(Fraction(int(i == j)) for i in range(8)) for j in range(8)
    )


def test_more_rows_never_grow_the_kernel():
    basis = enumerate_patterns(1)
    m = build_constraints(basis, corpus_seeds(), 60, seed=3)
    dims = []
    for k in (0, 5, 20, 60):
        dims.append(len(solve_nullspace((m.rows[:k], len(basis)))))
    assert dims == sorted(dims, reverse=True)


@given(st.lists(st.lists(st.integers(-4, 4), min_size=6, max_size=6), max_size=12))
@settings(max_examples=80, deadline=None)
def test_modular_matches_exact(rows):
    exact = _nullspace_exact(rows, 6)
    fast = _nullspace_modular(rows, 6) if rows else exact
    assert fast is not None
    assert len(fast) == len(exact)
    for v in fast:
        assert in_span(exact, v)
        assert all(sum(a * b for a, b in zip(r, v)) == 0 for r in rows)


@pytest.mark.parametrize("q", [Fraction(1, 3), Fraction(-2, 3), Fraction(7), Fraction(-5, 11)])
def test_rational_reconstruction(q):
    x = q.numerator * pow(q.denominator, -1, PRIME) % PRIME
    assert _rational_reconstruct(x) == q


def test_solver_recovers_lk():
    report = solve(1, 200, seed=5, verify_walks=3)
    assert report.status == ["verified"] * len(report.vectors)
    lk = load_builtin("lk")["lk"]
    assert in_span(report.vectors, vector_of(lk, report.basis))
    assert '"status"' in report.to_json()


def test_vector_round_trip():
    f = load_builtin("theorem2_all")["theorem2_third"]
    basis = enumerate_patterns(3)
    v = vector_of(f, basis)
    g = formula_of(v, basis)
    for d in corpus(9, 15):
        assert evaluate(f, d) == evaluate(g, d)
    m = build_constraints(basis, corpus_seeds(), 50, seed=9)
    assert satisfies(m, v)
    with pytest.raises(KeyError):
        vector_of(f, enumerate_patterns(1))


def test_order_check():
    lk = load_builtin("lk")["lk"]
    d = hopf(1, 1)
    assert order_check(lk, d, [1]) == 1
    assert order_check(lk, d, [1, 2]) == 0
    with pytest.raises(KeyError):
        order_check(lk, d, [7])


def test_violation_replays():
    f = load_builtin("writhe_like")["writhe_like"]
    bad = find_violation(f, hopf(1, 1), 100, 1)
    assert bad is not None and bad.before != bad.after
    assert "R1" in bad.replay_text()
    assert find_violation(load_builtin("lk")["lk"], l_mn(1, 1), 60, 1) is None


def test_corpus_is_deterministic_and_capped():
    a, b = corpus(4, 30), corpus(4, 30)
    assert a == b and len(a) == 30
    assert max(len(d) for d in a) <= 26


def test_planted_kernel_vector():
    rng = np.random.default_rng(0)
    a = rng.integers(-9, 10, size=(40, 12))
    v = rng.integers(-5, 6, size=11)
    a[:, -1] = -(a[:, :-1] @ v)
    out = solve_nullspace((a.tolist(), 12))
    assert len(out) == 1
    assert out[0] == [Fraction(int(x)) for x in v] + [Fraction(1)]
