from __future__ import annotations

import pytest

from pluralsem.kernel import (
    Arrow,
    Base,
    Const,
    IllTyped,
    Pi,
    TyVar,
    TypingContext,
    alpha_eq,
    type_of,
    types_equal,
)
from pluralsem.logic import (
    FALSE,
    TRUE,
    builtin_signature,
    card_of_enumeration,
    is_blocked,
    pretty,
    simplify,
)
from pluralsem.syntax import parse_term, parse_type

SIG = builtin_signature()
E, T = Base("e"), Base("t")


def sig_with(*consts):
    return SIG.extended((), consts)


NAMES = sig_with(("j", E), ("d", E), ("meet", Arrow(Arrow(E, T), T)), ("student", Arrow(E, T)),
                 ("walk", Arrow(E, T)))


# --------------------------------------------------------------- signature


def test_quantifiers_have_a_single_polymorphic_type():
    expected = parse_type("Pi a. (a -> t) -> t", SIG)
    assert types_equal(SIG.type_of_const("forall"), expected)
    assert types_equal(SIG.type_of_const("exists"), expected)


def test_selector_type():
    assert types_equal(SIG.type_of_const("iota"), parse_type("Pi a. (a -> t) -> a", SIG))


def test_missing_constant_absent():
    assert SIG.type_of_const("frobnicate") is None


def test_every_builtin_is_well_formed_and_closed():
    ctx = TypingContext(SIG)
    from pluralsem.kernel import check_type, free_type_vars

    for name, ty in SIG.constants.items():
        assert free_type_vars(ty) == frozenset(), name
        check_type(ctx, ty)


def test_numerals_are_naturals():
    assert types_equal(SIG.type_of_const("17"), Base("N"))


# ----------------------------------------------------------- card counting


def test_two_element_enumeration():
    p = parse_term("lam y:e. (y == j) || (y == d)", NAMES)
    assert card_of_enumeration(p) == 2


def test_singleton_enumeration():
    p = parse_term("lam y:e. y == j", NAMES)
    assert card_of_enumeration(p) == 1


def test_non_enumeration_is_unknown():
    p = parse_term("lam x:e. student x", NAMES)
    assert card_of_enumeration(p) is None


def test_repeated_name_is_unknown():
    p = parse_term("lam y:e. (y == j) || (y == j)", NAMES)
    assert card_of_enumeration(p) is None


def test_count_is_order_insensitive():
    a = parse_term("lam y:e. (y == j) || (y == d)", NAMES)
    b = parse_term("lam y:e. (y == d) || (y == j)", NAMES)
    assert card_of_enumeration(a) == card_of_enumeration(b) == 2


# ---------------------------------------------------------------- simplify


def test_true_cardinality_guard_is_discharged():
    f = parse_term(
        "(|lam y:e. (y == j) || (y == d)| > 1) && meet(lam y:e. (y == j) || (y == d))",
        NAMES,
    )
    expected = parse_term("meet(lam y:e. (y == j) || (y == d))", NAMES)
    assert alpha_eq(simplify(f, NAMES), expected)


def test_failed_cardinality_guard_blocks():
    f = parse_term("(|lam y:e. y == j| > 1) && meet(lam y:e. y == j)", NAMES)
    assert simplify(f, NAMES) == FALSE


def test_distributive_formula_is_stable():
    f = parse_term("all x:e. ((x == j) || (x == d)) => walk x", NAMES)
    assert alpha_eq(simplify(f, NAMES), f)


def test_true_antecedent_discharged():
    f = parse_term("true => walk j", NAMES)
    assert alpha_eq(simplify(f, NAMES), parse_term("walk j", NAMES))


def test_simplify_is_idempotent_and_type_preserving():
    ctx = TypingContext(NAMES)
    for text in [
        "(|lam y:e. (y == j) || (y == d)| > 1) && meet(lam y:e. (y == j) || (y == d))",
        "(|lam y:e. y == j| > 1) && meet(lam y:e. y == j)",
        "all x:e. ((x == j) || (x == d)) => walk x",
        "lam P:(e -> t). (|P| > 1) && meet P",
    ]:
        f = parse_term(text, NAMES)
        once = simplify(f, NAMES)
        assert alpha_eq(simplify(once, NAMES), once)
        assert types_equal(type_of(ctx, once), type_of(ctx, f))


def test_variable_cardinalities_survive():
    f = parse_term("all P:(e -> t). (|P| > 1) => meet P", NAMES)
    assert alpha_eq(simplify(f, NAMES), f)


def test_simplify_rejects_ill_typed():
    from pluralsem.kernel import App

    with pytest.raises(IllTyped):
        simplify(App(Const("meet"), Const("true")), NAMES)


# --------------------------------------------------------------- blocking


def test_blocked_detection():
    assert is_blocked(FALSE)
    assert not is_blocked(TRUE)
    assert not is_blocked(parse_term("meet(lam y:e. (y == j) || (y == d))", NAMES))


# ---------------------------------------------------------------- printing


def test_pretty_application():
    f = parse_term("meet(lam y:e. (y == j) || (y == d))", NAMES)
    assert pretty(f) == "meet(lam x0:e. x0 == j || x0 == d)"


def test_pretty_forall_sugar():
    f = parse_term("all x:e. ((x == j) || (x == d)) => walk x", NAMES)
    assert pretty(f) == "all x0:e. x0 == j || x0 == d => walk(x0)"
