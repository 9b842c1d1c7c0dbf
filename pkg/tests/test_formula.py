import random

import pytest
from hypothesis import given, settings, strategies as st

from palcheck.formula import (CK, RCK, TOP, And, Announce, Atom, Everyone, Iff, Imp, Knows, Neg, Or,
                              ParseError, Top, UnbalancedParenthesisError, UnknownOperatorError,
                              announcement_depth, atoms, agents, generate_formulas, modal_depth,
                              normalize_ck, parse, random_formula, render, substitute, to_json, walk)

p, q, r = Atom("p"), Atom("q"), Atom("r")


@pytest.mark.parametrize("text, expected", [
    ("p", p),
    ("[!~(K a wsa | K a ~wsa)] K c wsc",
     Announce(Neg(Or(Knows("a", Atom("wsa")), Knows("a", Neg(Atom("wsa"))))), Knows("c", Atom("wsc")))),
    ("p -> q -> r", Imp(p, Imp(q, r))),
    ("p <-> q <-> r", Iff(p, Iff(q, r))),
    ("p & q & r", And(And(p, q), r)),
    ("p | q & r", Or(p, And(q, r))),
    ("p -> q <-> r", Iff(Imp(p, q), r)),
    ("~p & q", And(Neg(p), q)),
    ("K a p & q", And(Knows("a", p), q)),
    ("K p q", Knows("p", q)),
    ("E p", Everyone(p)),
    ("C p", CK(p)),
    ("C (p & q)", CK(And(p, q))),
    ("C(p | q)", RCK(p, q)),
    ("C(p & q | r -> p)", RCK(And(p, q), Imp(r, p))),
    ("[!p] q & r", And(Announce(p, q), r)),
    ("[!p -> q] r", Announce(Imp(p, q), r)),
    ("top", TOP),
    ("  p\t->\nq ", Imp(p, q)),
])
def test_parse_examples(text, expected):
    assert parse(text) == expected


@pytest.mark.parametrize("f, text", [
    (p, "p"),
    (CK(p), "C p"),
    (And(Or(p, q), r), "(p | q) & r"),
    (Imp(Imp(p, q), r), "(p -> q) -> r"),
    (Imp(p, Imp(q, r)), "p -> q -> r"),
    (And(p, And(q, r)), "p & (q & r)"),
    (Neg(Knows("a", p)), "~K a p"),
    (Knows("a", Neg(p)), "K a ~p"),
    (RCK(Or(p, q), r), "C((p | q) | r)"),
    (CK(Or(p, q)), "C ((p | q))"),
    (Announce(And(p, q), Knows("b", r)), "[!p & q] K b r"),
])
def test_render_examples(f, text):
    assert render(f) == text
    assert parse(text) == f


def test_rck_with_top_guard_keeps_its_shape():
    f = RCK(TOP, p)
    assert parse(render(f)) == f
    assert normalize_ck(CK(p)) == f


@pytest.mark.parametrize("text, offset, cls", [
    ("p & (q", 4, UnbalancedParenthesisError),
    ("p & q)", 5, UnbalancedParenthesisError),
    ("p => q", 2, UnknownOperatorError),
    ("p &", 3, ParseError),
    ("", 0, ParseError),
    ("K p", 3, ParseError),
    ("[!p q", 4, ParseError),
])
def test_parse_errors_report_offsets(text, offset, cls):
    with pytest.raises(cls) as info:
        parse(text)
    assert info.value.offset == offset
    assert isinstance(info.value, ValueError)


def test_parse_error_lists_expected_tokens():
    with pytest.raises(ParseError) as info:
        parse("p &")
    assert "identifier" in info.value.expected


def test_reserved_words_are_not_atoms():
    with pytest.raises(ParseError):
        parse("K")
    with pytest.raises(ParseError):
        parse("p & E")


def test_substitute_examples():
    moore = And(q, Neg(Knows("a", q)))
    assert substitute(Imp(p, p), "p", moore) == Imp(moore, moore)
    assert substitute(q, "p", TOP) == q
    assert substitute(Announce(p, p), "p", Neg(p)) == Announce(Neg(p), Neg(p))


def test_syntactic_measures():
    g = parse("[!~(K a wsa | K a ~wsa)] [!~(K b wsb | K b ~wsb)] K c wsc")
    assert announcement_depth(g) == 2
    assert agents(g) == {"a", "b", "c"}
    assert atoms(g) == {"wsa", "wsb", "wsc"}
    assert modal_depth(parse("K a K b p & E q")) == 2


def test_to_json():
    assert to_json(parse("K a p -> C(q | top)")) == ["imp", ["K", "a", ["atom", "p"]], ["rck", ["atom", "q"], ["top"]]]


def test_generator_is_deterministic_and_distinct():
    a = generate_formulas(200, 3, ["a", "b"], ["p", "q"], seed=5)
    assert a == generate_formulas(200, 3, ["a", "b"], ["p", "q"], seed=5)
    assert len(set(a)) == 200
    kinds = {type(g) for f in a for g in walk(f)}
    assert kinds >= {Atom, Top, Neg, And, Or, Imp, Iff, Knows, Everyone, Announce, RCK, CK}


def _naive_substitute(f, target, repl):
    # text-free oracle: rebuild through dataclass fields
    if isinstance(f, Atom):
        return repl if f.name == target else f
    fields = {k: (_naive_substitute(v, target, repl) if not isinstance(v, str) else v)
              for k, v in vars(f).items()}
    return type(f)(**fields)


seeds = st.integers(min_value=0, max_value=2**32 - 1)


def _formula(seed, depth=6):
    return random_formula(random.Random(seed), depth, ["a", "b"], ["p", "q", "r"])


@settings(max_examples=1500, deadline=None)
@given(seeds)
def test_round_trip(seed):
    f = _formula(seed)
    assert parse(render(f)) == f


@settings(max_examples=300, deadline=None)
@given(seeds)
def test_substitution_identity_and_composition(seed):
    f = _formula(seed, 4)
    assert substitute(f, "p", p) == f
    g = _formula(seed + 1, 2)
    g = substitute(g, "q", r)  # q must not occur in g
    h = _formula(seed + 2, 2)
    expected = _naive_substitute(_naive_substitute(f, "p", g), "q", h)
    assert substitute(substitute(f, "p", g), "q", h) == expected
