import pytest

from gaussinv.bracket import evaluate
from gaussinv.diagram import writhe
from gaussinv.families import (
    FamilyError,
    FamilySpec,
    braid_closure,
    generate,
    hopf,
    l_mn,
    load_builtin,
    seed_specs,
    table1_report,
    twist_chain,
)

LK = load_builtin("lk")["lk"]
LK21 = load_builtin("lk21")["lk21"]


@pytest.mark.parametrize("text, spec", [
    ("unlink", FamilySpec("unlink")),
    ("hopf_pm", FamilySpec("hopf", (1, -1))),
    ("L_3_5", FamilySpec("L_mn", (3, 5))),
    ("twist_chain_2_-1", FamilySpec("twist_chain", (2, -1))),
])
def test_spec_names_round_trip(text, spec):
    assert FamilySpec.parse(text) == spec
    assert spec.name == text


@pytest.mark.parametrize("text", ["hopf_px", "L_a_b", "trefoil", "L_2_1", "unlink_1"])
def test_bad_names(text):
    with pytest.raises(FamilyError):
        generate(FamilySpec.parse(text))


def test_every_seed_generates():
    assert len(seed_specs()) == 9
    for sp in seed_specs():
        generate(sp)


@pytest.mark.parametrize("m, n", [(1, 1), (3, 1), (1, 5), (7, 3)])
def test_l_mn_shape(m, n):
    d = l_mn(m, n)
    assert len(d) == m + n + 8
    assert evaluate(LK, d) == evaluate(LK21, d) == 0


def test_l_mn_twist_lies_on_component_one():
    f = load_builtin("theorem1_all")
    for m, n in ((1, 3), (5, 1)):
        d = l_mn(m, n)
        assert evaluate(f["theorem1_third"], d) == m
        assert evaluate(f["theorem1_first"], d) == -n


@pytest.mark.parametrize("signs, lk", [((1, 1), 1), ((1, -1), 0), ((-1, 1), 0), ((-1, -1), -1)])
def test_hopf_variants(signs, lk):
    d = hopf(*signs)
    assert writhe(d) == sum(signs)
    assert evaluate(LK, d) == evaluate(LK21, d) == lk


def test_twist_chain_linking():
    for t in range(4):
        for s in (1, -1):
            assert evaluate(LK, twist_chain(t, s)) == s * t
    with pytest.raises(FamilyError):
        twist_chain(-1)


def test_braid_closure_needs_two_components():
    with pytest.raises(FamilyError):
        braid_closure([1, 2], 3)  # one component
    with pytest.raises(FamilyError):
        braid_closure([], 3)


def test_table1_report_rows():
    rows = table1_report(3)
    assert {(m, n) for m, n, _, _ in rows} == {(1, 1), (1, 3), (3, 1), (3, 3)}
    with pytest.raises(FamilyError):
        table1_report(0)
