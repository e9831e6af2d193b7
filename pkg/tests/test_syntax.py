from __future__ import annotations

import pytest

from pluralsem.kernel import (
    App,
    Arrow,
    Base,
    Const,
    Lam,
    Pi,
    TyApp,
    TyVar,
    TypingContext,
    Var,
    alpha_eq,
    type_of,
    types_equal,
)
from pluralsem.logic import builtin_signature
from pluralsem.syntax import (
    ElaborationError,
    ParseError,
    parse_term,
    parse_type,
    pretty_term,
    pretty_type,
)
from termgen import TermGen

SIG = builtin_signature()


# ------------------------------------------------------------------- types


def test_arrow_right_associative():
    assert types_equal(parse_type("e -> g -> t", SIG), Arrow(Base("e"), Arrow(Base("g"), Base("t"))))


def test_parenthesized_domain():
    assert types_equal(
        parse_type("(e -> t) -> t", SIG), Arrow(Arrow(Base("e"), Base("t")), Base("t"))
    )


def test_pi_types_round_trip():
    ty = parse_type("Pi a. (a -> t) -> a", SIG)
    assert types_equal(ty, Pi("b", Arrow(Arrow(TyVar("b"), Base("t")), TyVar("b"))))
    assert types_equal(parse_type(pretty_type(ty), SIG), ty)


def test_unknown_sort_rejected():
    with pytest.raises(ElaborationError):
        parse_type("zork", SIG)


# ------------------------------------------------------------------- terms


def test_application_binds_tighter_than_operators():
    term = parse_term("lam P:(e -> t). lam x:e. P x && P x", SIG)
    body = term.body.body
    assert body.fn.fn == Const("and")


def test_implication_is_right_associative():
    term = parse_term("true => false => true", SIG)
    assert term.fn.arg == Const("true")
    inner = term.arg
    assert inner.fn.fn == Const("implies")


def test_equality_auto_instantiates():
    term = parse_term("lam x:e. x == x", SIG)
    eq_app = term.body
    assert eq_app.fn.fn == TyApp(Const("eq"), Base("e"))


def test_single_equals_is_an_alias():
    a = parse_term("lam x:e. x = x", SIG)
    b = parse_term("lam x:e. x == x", SIG)
    assert alpha_eq(a, b)


def test_cardinality_circumfix():
    term = parse_term("lam P:(e -> t). |P| > 1", SIG)
    gt_app = term.body
    card_app = gt_app.fn.arg
    assert card_app.fn == TyApp(Const("card"), Base("e"))


def test_quantifier_sugar():
    term = parse_term("all x:e. x == x", SIG)
    assert term.fn == TyApp(Const("forall"), Base("e"))
    assert isinstance(term.arg, Lam)


def test_unicode_accepted_on_input():
    a = parse_term("∀x:e. (x == x) ∧ (x == x) ⇒ (x == x) ∨ false", SIG)
    b = parse_term("all x:e. (x == x) && (x == x) => (x == x) || false", SIG)
    assert alpha_eq(a, b)


def test_lambda_unicode():
    assert alpha_eq(parse_term("λx:e. x", SIG), parse_term("lam x:e. x", SIG))


def test_call_syntax_with_commas():
    a = parse_term("lam x:e. lam y:g. member_of(x, y)", SIG)
    b = parse_term("lam x:e. lam y:g. member_of x y", SIG)
    assert alpha_eq(a, b)


def test_explicit_type_application():
    term = parse_term("iota{e}", SIG)
    assert term == TyApp(Const("iota"), Base("e"))


def test_comments_are_ignored():
    term = parse_term("true && false # both literals", SIG)
    assert term == App(App(Const("and"), Const("true")), Const("false"))


def test_parse_error_carries_position():
    with pytest.raises(ParseError) as info:
        parse_term("lam x:e. (x", SIG)
    assert info.value.line == 1


def test_unknown_constant_is_elaboration_error():
    with pytest.raises(ElaborationError):
        parse_term("blorp", SIG)


# ---------------------------------------------------------------- printing


def test_pretty_uses_canonical_names():
    term = parse_term("lam somebody:e. somebody == j", SIG.extended((), (("j", Base("e")),)))
    assert pretty_term(term) == "lam x0:e. x0 == j"


def test_pretty_is_alpha_invariant():
    sig = SIG.extended((), (("meet", Arrow(Arrow(Base("e"), Base("t")), Base("t"))),))
    a = parse_term("meet(lam u:e. u == u)", sig)
    b = parse_term("meet(lam w:e. w == w)", sig)
    assert pretty_term(a) == pretty_term(b)


def test_pretty_quantifier_sugar():
    term = parse_term("all x:e. x == x", SIG)
    assert pretty_term(term) == "all x0:e. x0 == x0"


def test_pretty_unicode_mode():
    term = parse_term("all x:e. (x == x) && true", SIG)
    out = pretty_term(term, unicode=True)
    assert "∀" in out and "∧" in out
    assert alpha_eq(parse_term(out, SIG), term)


def test_redex_prints_reparseably():
    term = parse_term("(lam x:e. x)(iota{e}(lam y:e. true))", SIG)
    assert alpha_eq(parse_term(pretty_term(term), SIG), term)


def test_round_trip_on_random_terms():
    gen = TermGen(seed=21)
    context = TypingContext(gen.sig)
    for _ in range(80):
        term = gen.term(depth=4)
        printed = pretty_term(term)
        reparsed = parse_term(printed, gen.sig)
        assert alpha_eq(reparsed, term), printed
        assert types_equal(type_of(context, reparsed), type_of(context, term))
