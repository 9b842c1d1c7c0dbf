import json
import random
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from oracle import all_relations, is_equivalence, naive_tc
from palcheck.model import (EpistemicModel, FrameClass, ModelError, Relation, classify_frame,
                            count_models, dump_model, enumerate_models, evr, intersection_rel, is_s5,
                            load_model, model_at, restrict, set_partitions, sub_rel, tc, tc_oracle,
                            union_rel)

W2 = ("w1", "w2")
W3 = ("w1", "w2", "w3")


def rel(*pairs, worlds=W3):
    return Relation.from_pairs(worlds, pairs)


def test_union_examples():
    assert union_rel(rel(), rel(("w1", "w2"))).pairs == {("w1", "w2")}
    assert union_rel(rel(("w1", "w1")), rel(("w1", "w1"))).pairs == {("w1", "w1")}
    assert union_rel(rel(("w1", "w2")), rel(("w2", "w1"))).pairs == {("w1", "w2"), ("w2", "w1")}


def test_intersection_examples():
    r = rel(("w1", "w2"), ("w2", "w2"))
    assert intersection_rel(rel(("w1", "w2")), rel()).pairs == set()
    assert intersection_rel(r, rel(("w2", "w2"))).pairs == {("w2", "w2")}
    assert intersection_rel(r, r) == r


def test_sub_rel_examples():
    r = rel(("w1", "w2"), ("w3", "w1"))
    assert sub_rel(rel(), r)
    assert sub_rel(r, r)
    assert not sub_rel(rel(("w1", "w2")), rel(("w2", "w1")))


def test_relation_ops_reject_other_universes():
    with pytest.raises(ModelError):
        union_rel(rel(), Relation.empty(W2))
    with pytest.raises(ModelError):
        Relation.from_pairs(W2, [("w1", "w9")])


def test_tc_examples():
    assert tc(rel(("w1", "w2"), ("w2", "w3"))).pairs == {("w1", "w2"), ("w2", "w3"), ("w1", "w3")}
    assert tc(rel()).pairs == set()
    assert tc(rel(("w1", "w1"))).pairs == {("w1", "w1")}


def test_tc_oracle_examples():
    both = Relation.from_pairs(W2, [("w1", "w2"), ("w2", "w1")])
    assert tc_oracle(both).pairs == {(x, y) for x in W2 for y in W2}
    assert tc_oracle(Relation.empty(W2)).pairs == set()
    assert tc_oracle(Relation.from_pairs(W2, [("w1", "w2")])).pairs == {("w1", "w2")}
    with pytest.raises(ModelError):
        tc_oracle(Relation.empty(tuple(f"w{i}" for i in range(5))))


def test_tc_matches_oracles_on_every_3_world_relation():
    seen = 0
    for pairs in all_relations(W3):
        r = Relation.from_pairs(W3, pairs)
        closed = tc(r)
        assert closed == tc_oracle(r)
        assert closed.pairs == naive_tc(pairs)
        seen += 1
    assert seen == 512


def test_tc_matches_oracle_on_random_4_world_relations():
    rng = random.Random(4)
    worlds = ("w1", "w2", "w3", "w4")
    for _ in range(200):
        pairs = [(x, y) for x in worlds for y in worlds if rng.random() < 0.25]
        r = Relation.from_pairs(worlds, pairs)
        assert tc(r) == tc_oracle(r)


relations3 = st.sets(st.tuples(st.sampled_from(W3), st.sampled_from(W3))).map(lambda ps: rel(*ps))


@settings(max_examples=200, deadline=None)
@given(relations3, relations3, relations3)
def test_union_intersection_laws(r, q, s):
    assert union_rel(r, q) == union_rel(q, r)
    assert intersection_rel(r, q) == intersection_rel(q, r)
    assert union_rel(union_rel(r, q), s) == union_rel(r, union_rel(q, s))
    assert intersection_rel(intersection_rel(r, q), s) == intersection_rel(r, intersection_rel(q, s))
    assert union_rel(r, intersection_rel(r, q)) == r
    assert intersection_rel(r, union_rel(r, q)) == r


@settings(max_examples=200, deadline=None)
@given(relations3, relations3)
def test_tc_is_least_transitive_superset(r, q):
    closed = tc(r)
    assert closed.is_transitive()
    assert sub_rel(r, closed)
    t = tc(union_rel(r, q))
    assert sub_rel(closed, t)


def _model(worlds, rel_pairs, valuation):
    return EpistemicModel.build(worlds, rel_pairs, valuation)


UNIVERSAL2 = [(x, y) for x in W2 for y in W2]


def test_evr_examples():
    m = _model(W2, {"a": UNIVERSAL2}, {})
    assert evr(m) == m.rel["a"]
    m = _model(W2, {"a": [("w1", "w2")], "b": [("w2", "w1")]}, {})
    assert evr(m).pairs == {("w1", "w2"), ("w2", "w1")}
    m = _model(W2, {"a": [], "b": [], "c": []}, {})
    assert evr(m).pairs == set()


def test_classify_frame_examples():
    assert classify_frame(_model(W2, {"a": UNIVERSAL2}, {}))["a"] == (True, True, True)
    assert classify_frame(_model(("w1",), {"a": []}, {}))["a"] == (False, True, True)
    assert classify_frame(_model(W2, {"a": [("w1", "w2")]}, {}))["a"] == (False, True, False)


def test_restrict_examples():
    m = _model(W2, {"a": UNIVERSAL2}, {"p": ["w1"], "q": []})
    assert restrict(m, W2) == m
    small = restrict(m, ["w1"])
    assert small.worlds == ("w1",)
    assert small.rel["a"].pairs == {("w1", "w1")}
    assert small.valuation == {"p": frozenset({"w1"}), "q": frozenset()}
    with pytest.raises(ModelError):
        restrict(m, [])


def test_restrict_composes():
    for m in enumerate_models(3, ["a"], ["p"], FrameClass.K, stop=300):
        for d1, d2 in product(range(1, 8), repeat=2):
            if d1 & d2:
                s1 = [w for i, w in enumerate(m.worlds) if d1 >> i & 1]
                s2 = [w for i, w in enumerate(s1) if d2 >> m.index[w] & 1]
                both = [w for i, w in enumerate(m.worlds) if (d1 & d2) >> i & 1]
                assert restrict(restrict(m, s1), s2) == restrict(m, both)


@pytest.mark.parametrize("n, agents, atoms, frame, expected", [
    (1, ["a"], ["p"], FrameClass.K, 4),
    (2, ["a"], [], FrameClass.S5, 2),
    (3, ["a"], [], FrameClass.S5, 5),
    (2, ["a", "b"], ["p", "q"], FrameClass.K, 2 ** 8 * 2 ** 4),
    (3, ["a", "b"], ["p"], FrameClass.K, 2 ** 18 * 2 ** 3),
])
def test_enumeration_counts(n, agents, atoms, frame, expected):
    assert count_models(n, agents, atoms, frame) == expected


@pytest.mark.parametrize("n, bell", [(1, 1), (2, 2), (3, 5), (4, 15)])
def test_s5_counts_are_bell_numbers(n, bell):
    assert len(set_partitions(n)) == bell
    assert count_models(n, ["a"], [], FrameClass.S5) == bell
    assert count_models(n, ["a", "b"], [], FrameClass.S5) == bell ** 2
    assert sum(1 for _ in enumerate_models(n, ["a"], [], FrameClass.S5)) == bell


def test_s5_enumeration_is_exactly_the_equivalence_relations():
    for n in (1, 2, 3):
        worlds = tuple(f"w{i + 1}" for i in range(n))
        expected = {r for r in all_relations(worlds) if is_equivalence(worlds, r)}
        got = [m.rel["a"].pairs for m in enumerate_models(n, ["a"], [], FrameClass.S5)]
        assert len(got) == len(set(got))
        assert set(got) == expected
    for m in enumerate_models(3, ["a", "b"], ["p"], FrameClass.S5):
        assert is_s5(m)


def test_k_enumeration_order_follows_bit_encoding():
    # relation digit before valuation digit; relation bit k is pair (w_{k//n+1}, w_{k%n+1})
    n = 2
    models = list(enumerate_models(n, ["a"], ["p"], FrameClass.K))
    assert len(models) == 64
    for index, m in enumerate(models):
        code, val = divmod(index, 4)
        pairs = {(f"w{k // n + 1}", f"w{k % n + 1}") for k in range(4) if code >> k & 1}
        assert m.rel["a"].pairs == pairs
        assert m.valuation["p"] == {f"w{j + 1}" for j in range(2) if val >> j & 1}
    assert model_at(5, n, ["a"], ["p"], FrameClass.K) == models[5]
    assert list(enumerate_models(n, ["a"], ["p"], FrameClass.K, start=10, stop=13)) == models[10:13]


def test_agents_vary_most_significant_first():
    m = model_at(1, 1, ["a", "b"], [], FrameClass.K)
    assert m.rel["a"].pairs == set() and m.rel["b"].pairs == {("w1", "w1")}


def test_model_file_round_trip():
    m = _model(W2, {"a": UNIVERSAL2, "b": [("w1", "w1")]}, {"p": ["w1"], "q": []})
    assert load_model(dump_model(m)) == m
    doc = json.loads(dump_model(m))
    assert doc["worlds"] == ["w1", "w2"]
    assert doc["agents"]["b"] == [["w1", "w1"]]


@pytest.mark.parametrize("doc", [
    {"worlds": ["w1"], "agents": {}, "valuation": {}, "extra": 1},
    {"worlds": ["w1"], "agents": {}},
    {"worlds": [], "agents": {}, "valuation": {}},
    {"worlds": ["w1", "w1"], "agents": {}, "valuation": {}},
    {"worlds": ["w1"], "agents": {"a": [["w1", "w2"]]}, "valuation": {}},
    {"worlds": ["w1"], "agents": {}, "valuation": {"p": ["w2"]}},
    {"worlds": ["w1"], "agents": {"K": []}, "valuation": {}},
    {"worlds": ["w1"], "agents": {"a": [["w1"]]}, "valuation": {}},
    [],
])
def test_bad_model_files_are_rejected(doc):
    with pytest.raises(ModelError):
        load_model(json.dumps(doc))


def test_non_json_is_rejected():
    with pytest.raises(ModelError):
        load_model("{not json")
