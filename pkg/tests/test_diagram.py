import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import diagrams
from gaussinv.diagram import (
    DiagramError,
    GaussDiagram,
    canonical_form,
    delete_arrows,
    isomorphic,
    parse,
    restrict,
    serialize,
    switch_crossing,
    writhe,
)

HOPF = "comp1: T1 H2\ncomp2: H1 T2\nsigns: 1:+ 2:+\n"


def test_parse_basic():
    d = parse(HOPF)
    assert len(d) == 2
    a = d.arrows[1]
    assert a.is_mixed and a.tail.component == 1 and a.head.component == 2
    assert writhe(d) == 2


def test_empty_lines_allowed():
    d = parse("comp1:\ncomp2:\nsigns:\n")
    assert d == GaussDiagram.empty()
    assert serialize(d) == "comp1:\ncomp2:\nsigns:"


@pytest.mark.parametrize("text, line, col", [
    ("comp1: T1 X1\ncomp2: H1\nsigns: 1:+\n", 1, 11),
    ("comp1: T1\ncomp2: H2\nsigns: 1:+\n", 1, 8),
    ("comp1: T1 T1\ncomp2: H1\nsigns: 1:+\n", 1, 11),
    ("comp1: T1\ncomp2: H1\nsigns: 1:*\n", 3, 8),
    ("comp1: T1\ncomp2: H1\nsigns:\n", 3, 1),
    ("comp1: T1\nsigns: 1:+\n", 1, 1),
    ("comp2: T1\ncomp1: H1\nsigns: 1:+\n", 1, 1),
])
def test_parse_errors_have_positions(text, line, col):
    with pytest.raises(DiagramError) as err:
        parse(text)
    assert (err.value.line, err.value.column) == (line, col)


def test_canonical_ignores_rotation_and_labels():
    d = parse(HOPF)
    e = parse("comp1: H7 T3\ncomp2: T7 H3\nsigns: 3:+ 7:+\n")
    assert isomorphic(d, e)
    assert not isomorphic(d, d.swap_components().with_signs({1: -1}))


def test_components_are_labeled():
    d = parse("comp1: T1 H1\ncomp2:\nsigns: 1:+\n")
    assert not isomorphic(d, d.swap_components())


@given(diagrams(), st.integers(0, 20), st.integers(0, 20))
@settings(max_examples=150, deadline=None)
def test_canonical_form_invariant(d, r1, r2):
    ids = d.ids
    perm = dict(zip(ids, [i * 3 + 5 for i in reversed(ids)]))
    assert canonical_form(d.rotate(r1, r2).relabel(perm)) == canonical_form(d)


@given(diagrams())
@settings(max_examples=150, deadline=None)
def test_serialize_round_trip(d):
    text = serialize(d, canonical=False)
    assert parse(text + "\n") == d
    assert isomorphic(parse(serialize(d)), d)


@given(diagrams(max_arrows=5))
@settings(max_examples=100, deadline=None)
def test_switch_is_involution(d):
    for aid in d.ids:
        e = switch_crossing(d, aid)
        assert e.sign_map[aid] == -d.sign_map[aid]
        assert switch_crossing(e, aid) == d


def test_delete_and_restrict():
    d = parse(HOPF)
    assert len(delete_arrows(d, [1])) == 1
    assert restrict(d, [2]) == delete_arrows(d, [1])
    with pytest.raises(KeyError):
        delete_arrows(d, [9])
    with pytest.raises(KeyError):
        switch_crossing(d, 9)
