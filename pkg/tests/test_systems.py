import itertools
import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from surfcol.catalog import load_catalog
from surfcol.errors import BudgetExceeded, DomainError
from surfcol.systems import (
    EqVar,
    EquationSystem,
    TriEq,
    brute_force_count,
    count_colorings,
    enumerate_colorings,
    invertibility_witness,
    merge_systems,
    normalize,
    parse_equations,
    reverse_orientation,
)
from surfcol.tribracket import enumerate_tribrackets

CATALOG = {e.name: e.system for e in load_catalog()}


def test_parse_chain():
    s = parse_equations("d=e=f=[a,b,c]=[a,c,b]")
    assert s.names() == ("d", "e", "f", "a", "b", "c")
    assert set(s.tri_eqs) == {TriEq(3, 4, 5, 0), TriEq(3, 5, 4, 0)}
    assert set(s.eq_vars) == {EqVar(0, 1), EqVar(0, 2)}


def test_parse_bracket_only_chain_gets_aux():
    s = parse_equations("[a,b,c]=[a,c,b]")
    assert s.names()[-1] == "_t0"
    assert len(s.tri_eqs) == 2


def test_parse_errors():
    with pytest.raises(DomainError):
        parse_equations("a")
    with pytest.raises(DomainError):
        parse_equations("a=[b,c]")
    with pytest.raises(DomainError):
        parse_equations("a=z", variables=["a"])


def test_index_out_of_range():
    with pytest.raises(DomainError):
        EquationSystem(2, (TriEq(0, 1, 2, 0),))


def test_normalize_merges_equal_classes():
    s = CATALOG["8^{1,1}_1"]
    assert s.var_count == 6
    assert normalize(s).var_count == 4


def test_normalize_trivial_cases():
    assert normalize(EquationSystem(0)).var_count == 0
    s = EquationSystem(2, (), (EqVar(1, 1),))
    n = normalize(s)
    assert n.var_count == 2 and not n.tri_eqs


def test_normalize_keeps_free_variables(x3):
    s = EquationSystem(4, (TriEq(0, 1, 1, 0),))
    assert normalize(s).var_count == 4
    assert count_colorings(normalize(s), x3)[0] == count_colorings(s, x3)[0]


def test_unknot_count(x3):
    count, stats = count_colorings(CATALOG["0_1"], x3)
    assert count == 9
    assert stats.nodes_visited >= 0


@pytest.mark.parametrize(
    "name,count",
    [("0_1", 9), ("8_1", 15), ("-8_1", 15), ("9_1", 25), ("-9_1", 21), ("10_2", 37), ("-10_2", 37)],
)
def test_table_counts_that_reproduce(name, count, x3):
    assert count_colorings(CATALOG[name], x3)[0] == count


def test_brute_force_examples(x3, dehn_cyclic):
    assert brute_force_count(CATALOG["8_1"], x3) == 15
    assert brute_force_count(CATALOG["10_2"], x3) == 37
    assert brute_force_count(EquationSystem(1), dehn_cyclic[5]) == 5


def test_brute_force_budget(x3):
    with pytest.raises(BudgetExceeded):
        brute_force_count(CATALOG["10_2"], x3, budget=1000)


def test_solver_matches_oracle_everywhere(x3, x4, dehn_cyclic):
    tribs = [x3, x4] + [dehn_cyclic[n] for n in range(2, 6)] + list(enumerate_tribrackets(2))
    for t in tribs:
        for name, s in CATALOG.items():
            if t.size ** s.var_count <= 10**7:
                assert count_colorings(s, t)[0] == brute_force_count(s, t), (t.name, name)


def test_solver_is_deterministic(x4):
    s = CATALOG["10_3"]
    assert count_colorings(s, x4) == count_colorings(s, x4)


def test_enumerate_colorings(x3):
    got = enumerate_colorings(CATALOG["0_1"], x3, limit=100)
    assert sorted(got) == list(itertools.product(range(3), repeat=2))
    assert enumerate_colorings(CATALOG["0_1"], x3, limit=0) == []
    one = enumerate_colorings(CATALOG["9_1"], x3, limit=1)
    assert len(one) == 1 and CATALOG["9_1"].satisfied_by(one[0], x3)


def test_enumerate_unsatisfiable(x4):
    # X4 has no idempotent element, so [x,x,x] = y with x = y has no solution
    assert all(x4.eval(a, a, a) != a for a in range(4))
    s = EquationSystem(2, (TriEq(0, 0, 0, 1),), (EqVar(0, 1),))
    assert enumerate_colorings(s, x4) == []
    assert count_colorings(s, x4)[0] == 0


@pytest.mark.parametrize("name", sorted(CATALOG))
def test_witnesses_reverify(name, x4):
    s = CATALOG[name]
    for col in enumerate_colorings(s, x4, limit=50):
        assert s.satisfied_by(col, x4)


def test_reverse_examples():
    assert reverse_orientation(EquationSystem(5, (TriEq(0, 1, 2, 4),))).tri_eqs == (TriEq(4, 2, 1, 0),)
    fwd = parse_equations("[e,a,c]=b", variables=list("abcde"))
    rev = parse_equations("[b,c,a]=e", variables=list("abcde"))
    assert reverse_orientation(fwd).constraint_multiset() == rev.constraint_multiset()


@pytest.mark.parametrize("name", sorted(CATALOG))
def test_reverse_is_involution(name):
    s = CATALOG[name]
    assert reverse_orientation(reverse_orientation(s)) == s


def test_invertibility_witness(x3):
    assert tuple(invertibility_witness(CATALOG["9_1"], x3)) == (25, 21, True)
    assert tuple(invertibility_witness(CATALOG["10_2"], x3)) == (37, 37, False)


def test_abelian_dehn_reverse_symmetry(dehn_cyclic):
    for n in (2, 3, 4, 5):
        for s in CATALOG.values():
            t = dehn_cyclic[n]
            assert count_colorings(s, t)[0] == count_colorings(reverse_orientation(s), t)[0]


def test_commutative_swap(valid3):
    for t in valid3:
        if not t.is_commutative():
            continue
        a = EquationSystem(4, (TriEq(0, 1, 2, 3),))
        b = EquationSystem(4, (TriEq(0, 2, 1, 3),))
        assert set(enumerate_colorings(a, t, 100)) == set(enumerate_colorings(b, t, 100))


def test_merge_multiplies(x3, x4):
    s = merge_systems([CATALOG["8_1"], CATALOG["0_1"]])
    assert s.var_count == 7
    assert count_colorings(s, x4)[0] == count_colorings(CATALOG["8_1"], x4)[0] * 16


def test_json_round_trip(tmp_path):
    s = CATALOG["10_3"]
    path = tmp_path / "s.json"
    path.write_text(json.dumps(s.to_json()))
    assert EquationSystem.load(path) == s


def test_from_json_errors():
    with pytest.raises(DomainError):
        EquationSystem.from_json({"variables": ["a"], "equations": [{"op": "tri", "args": ["a", "a"]}]})
    with pytest.raises(DomainError):
        EquationSystem.from_json({"equations": []})


@given(perm_seed=st.permutations(range(10)), order=st.permutations(range(11)), idx=st.integers(0, 36))
def test_count_invariant_under_relabeling(perm_seed, order, idx, probe_tribrackets):
    t = probe_tribrackets[idx % len(probe_tribrackets)]
    s = CATALOG["10_3"]
    base = count_colorings(s, t)[0]
    shuffled = EquationSystem(s.var_count, tuple(s.tri_eqs[i] for i in order), s.eq_vars, s.var_names)
    assert count_colorings(shuffled.relabel(perm_seed), t)[0] == base


@given(data=st.data())
def test_random_systems_match_oracle(data, probe_tribrackets):
    t = data.draw(st.sampled_from(probe_tribrackets))
    nv = data.draw(st.integers(1, 6))
    v = st.integers(0, nv - 1)
    tri = data.draw(st.lists(st.tuples(v, v, v, v), max_size=5))
    eqs = data.draw(st.lists(st.tuples(v, v), max_size=2))
    s = EquationSystem(nv, tuple(tri), tuple(eqs))
    assert count_colorings(s, t)[0] == brute_force_count(s, t)
    assert count_colorings(s, t)[0] == len(enumerate_colorings(s, t, limit=10**6))
