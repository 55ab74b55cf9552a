import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import diagrams
from gaussinv.bracket import evaluate
from gaussinv.diagram import GaussDiagram, isomorphic
from gaussinv.families import hopf, l_mn, load_builtin
from gaussinv.lab import plant_r3_site
from gaussinv.moves import (
    ALL_KINDS,
    BACKWARD,
    FORWARD,
    INSERT,
    R3_KINDS,
    R3_LEFT_BITS,
    R3_SIGNS,
    REMOVE,
    MoveError,
    MoveInstance,
    MoveKind,
    _strand_slots,
    all_sites,
    apply,
    enumerate_sites,
    format_transcript,
    inverse,
    parse_transcript,
    r3_bits_valid,
    random_walk,
    replay,
)

LK = load_builtin("lk")["lk"]
DELTA = {"R1": 1, "R2": 2, "R3": 0}


def test_generating_set_only():
    assert [k.value for k in MoveKind] == ["R1a", "R1b", "R2", "R3b", "R3m", "R3t"]


def test_r1_insert_on_empty():
    sites = enumerate_sites(GaussDiagram.empty(), MoveKind.R1a, INSERT)
    assert len(sites) == 2
    d = apply(GaussDiagram.empty(), sites[0])
    a = d.arrows[1]
    assert a.sign == -1 and not a.is_mixed and a.tail.component == 1


def test_r2_remove_absent_on_hopf():
    assert enumerate_sites(hopf(1, 1), MoveKind.R2, REMOVE) == []


def test_r2_inserts_plus_and_minus():
    d = apply(hopf(1, 1), MoveInstance(MoveKind.R2, INSERT, (1, 0, 1)))
    assert sorted(d.sign_map[i] for i in (3, 4)) == [-1, 1]


def test_no_r3_without_triangle():
    for k in R3_KINDS:
        assert enumerate_sites(hopf(1, 1), k, FORWARD) == []


def test_bad_instance_rejected():
    with pytest.raises(MoveError):
        apply(hopf(1, 1), MoveInstance(MoveKind.R1a, REMOVE, (1,)))
    with pytest.raises(MoveError):
        enumerate_sites(hopf(1, 1), MoveKind.R1a, FORWARD)


@given(diagrams(max_arrows=5), st.integers(0, 10**9))
@settings(max_examples=80, deadline=None)
def test_every_move_round_trips_and_keeps_lk(d, seed):
    rng = random.Random(seed)
    sites = all_sites(d)
    for mi in rng.sample(sites, min(len(sites), 6)):
        e = apply(d, mi)
        delta = DELTA[mi.kind.value[:2]]
        assert len(e) - len(d) == (delta if mi.direction == INSERT else -delta if mi.direction == REMOVE else 0)
        if mi.direction != REMOVE:
            assert isomorphic(apply(e, inverse(d, mi)), d)
        assert evaluate(LK, e) == evaluate(LK, d)


@given(st.integers(0, 10**9), st.sampled_from(R3_KINDS), st.sampled_from([FORWARD, BACKWARD]))
@settings(max_examples=60, deadline=None)
def test_planted_r3_round_trip(seed, kind, direction):
    rng = random.Random(seed)
    base = l_mn(1, 1)
    d, mi = plant_r3_site(base, kind, rng, direction)
    assert mi in enumerate_sites(d, kind, direction)
    e = apply(d, mi)
    assert len(e) == len(d)
    assert isomorphic(apply(e, inverse(d, mi)), d)


def _bits(d, site):
    out = []
    for first, second in _strand_slots(*site):
        for circle in d.circles:
            if first in circle:
                i = circle.index(first)
                out.append(0 if circle[(i + 1) % len(circle)] == second else 1)
    return tuple(out)


@given(st.integers(0, 10**9), st.sampled_from(R3_KINDS))
@settings(max_examples=60, deadline=None)
def test_r3_order_bits(seed, kind):
    # both local pictures satisfy the planarity rule and the move flips every bit
    d, mi = plant_r3_site(l_mn(1, 1), kind, random.Random(seed))
    before = _bits(d, mi.site)
    after = _bits(apply(d, mi), mi.site)
    assert r3_bits_valid(R3_SIGNS, before) and r3_bits_valid(R3_SIGNS, after)
    assert all(a != b for a, b in zip(before, after))


def test_bit_rule_allows_complementary_pairs():
    import itertools

    for signs in itertools.product((1, -1), repeat=3):
        ok = [bits for bits in itertools.product((0, 1), repeat=3) if r3_bits_valid(signs, bits)]
        assert len(ok) == 2 and tuple(1 - x for x in ok[0]) == ok[1]
    assert r3_bits_valid(R3_SIGNS, R3_LEFT_BITS)


def test_walk_determinism_and_replay():
    t1, t2 = [], []
    w1 = random_walk(l_mn(1, 1), 40, 7, transcript=t1)
    w2 = random_walk(l_mn(1, 1), 40, 7, transcript=t2)
    assert w1 == w2 and t1 == t2
    assert replay(l_mn(1, 1), t1)[-1] == w1[-1]
    start, moves = parse_transcript(format_transcript(l_mn(1, 1), t1))
    assert start == l_mn(1, 1) and moves == t1
    assert random_walk(hopf(1, 1), 0, 1) == [hopf(1, 1)]
    with pytest.raises(ValueError):
        random_walk(hopf(1, 1), -1, 1)


def test_size_governor():
    walk = random_walk(l_mn(7, 7), 200, 3, ceiling=22)
    assert max(len(d) for d in walk) <= 23


def test_writhe_detected_by_walks():
    f = load_builtin("writhe_like")["writhe_like"]
    values = {evaluate(f, d) for d in random_walk(hopf(1, 1), 100, 1)}
    assert len(values) > 1


def test_all_kinds_reachable():
    t = []
    random_walk(l_mn(3, 3), 300, 11, transcript=t)
    seen = {mi.kind for mi in t}
    assert seen >= {MoveKind.R1a, MoveKind.R1b, MoveKind.R2}
    assert set(ALL_KINDS) >= seen
