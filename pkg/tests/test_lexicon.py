from __future__ import annotations

import pytest

from pluralsem.grammar import CatAtom, Left, Right
from pluralsem.kernel import Arrow, Base, TypingContext, alpha_eq, type_of, types_equal
from pluralsem.lexicon import (
    GLOBAL,
    LOCAL,
    LexSyntaxError,
    NotPredicative,
    derive_plural,
    load,
    validate,
)
from pluralsem.syntax import parse_term, parse_type

E, G, T = Base("e"), Base("g"), Base("t")


# ------------------------------------------------------------------ loading


def test_shipped_english_lexicon(english):
    assert len(english.entries) >= 14
    for form in ["met", "sneezed", "the", "each", "-s", "and", "q", "students"]:
        assert english.lookup(tuple(form.split())), form
    assert english.lookup(("wrote", "a", "paper"))


def test_empty_text_is_an_empty_lexicon():
    lex = load("")
    assert lex.entries == [] and lex.coercions == {}
    assert validate(lex) == []


def test_unknown_coercion_name_surfaces_at_validate():
    lex = load('entry "yawned" : np\\s = lam x:e. x == x  with [zeta]')
    diags = validate(lex)
    assert [d.kind for d in diags] == ["UnknownCoercion"]


def test_type_error_surfaces_at_validate_not_load():
    lex = load(
        "const meet : (e -> t) -> t\n"
        'entry "met" : np\\s = lam P:e. meet P\n'
    )
    diags = validate(lex)
    assert [d.kind for d in diags] == ["ApplicationMismatch"]
    assert diags[0].line == 2


def test_non_functional_coercion_diagnosed():
    lex = load("coercion oddity rigid=false scope=local : true")
    assert [d.kind for d in validate(lex)] == ["NotFunctional"]


def test_grammar_error_fails_at_load():
    with pytest.raises(LexSyntaxError) as info:
        load('entry "met" np\\s = lam x:e. x == x')
    assert info.value.line == 1


def test_rigidity_round_trips():
    lex = load(
        "const liverpool : e\n"
        "coercion f_c rigid=true scope=local : lam x:e. x\n"
        "coercion f_p rigid=false scope=local : lam x:e. x\n"
    )
    assert lex.coercions["f_c"].rigid is True
    assert lex.coercions["f_p"].rigid is False
    assert lex.rigid_names() == frozenset({"f_c"})


def test_scopes_round_trip(english):
    assert english.coercions["q"].scope == LOCAL
    assert english.coercions["grpflat"].scope == GLOBAL
    assert {c.name for c in english.global_coercions()} == {"member", "grpflat", "grpsets"}


def test_user_sorts_and_constants():
    lex = load("sort e_phys\nconst brick : e_phys -> t\n")
    assert "e_phys" in lex.signature.sorts
    assert types_equal(lex.signature.type_of_const("brick"), Arrow(Base("e_phys"), T))


# --------------------------------------------------------------- the tables


def test_lexical_terms_have_their_displayed_types(english):
    ctx = english.context()
    sig = english.signature
    expected = {
        "q": "Pi a. a -> a -> t",
        "-s": "Pi a. (a -> t) -> (a -> t) -> t",
        "and": "Pi a. (a -> t) -> (a -> t) -> a -> t",
        "the": "Pi a. (a -> t) -> a",
        "each": "Pi a. (a -> t) -> (a -> t) -> t",
        "met": "(e -> t) -> t",
        "sneezed": "e -> t",
        "wrote a paper": "(e -> t) -> t",
        "students": "(e -> t) -> t",
        "committees": "(g -> t) -> t",
        "members of": "g -> e -> t",
    }
    for form, ty_text in expected.items():
        (entry,) = english.lookup(tuple(form.split()))
        assert types_equal(type_of(ctx, entry.term), parse_type(ty_text, sig)), form
    member = english.coercions["member"]
    assert types_equal(type_of(ctx, member.term), parse_type("g -> e -> t", sig))


def test_categories_match_the_tables(english):
    cases = {
        "and": Right(Left(CatAtom("np"), CatAtom("np")), CatAtom("np")),
        "met": Left(CatAtom("np"), CatAtom("s")),
        "the": Right(CatAtom("np"), CatAtom("n")),
        "each": Right(Right(CatAtom("s"), Left(CatAtom("np"), CatAtom("s"))), CatAtom("n")),
        "-s": Left(CatAtom("n"), CatAtom("n")),
    }
    for form, cat in cases.items():
        (entry,) = english.lookup((form,))
        assert entry.cat == cat, form


# ------------------------------------------------------------------ plurals


def test_derived_plural_of_student(english):
    (student,) = english.lookup(("student",))
    derived = derive_plural(student, english.signature)
    assert derived.tokens == ("students",)
    expected = parse_term(
        "lam Q:(e -> t). (|Q| > 1) && (all x:e. Q x => student x)", english.signature
    )
    assert alpha_eq(derived.term, expected)


def test_derived_plural_of_committee(english):
    (committee,) = english.lookup(("committee",))
    derived = derive_plural(committee, english.signature)
    expected = parse_term(
        "lam Q:(g -> t). (|Q| > 1) && (all x:g. Q x => committee x)", english.signature
    )
    assert alpha_eq(derived.term, expected)


def test_french_plural_form_override(french):
    (comites,) = french.lookup(("comités",))
    expected = parse_term(
        "lam Q:(g -> t). (|Q| > 1) && (all x:g. Q x => comite x)", french.signature
    )
    assert alpha_eq(comites.term, expected)


def test_plural_of_a_plural_is_rejected(english):
    (students,) = english.lookup(("students",))
    with pytest.raises(NotPredicative):
        derive_plural(students, english.signature)


# ------------------------------------------------------------------- lookup


def test_lookup_forms(english):
    assert len(english.lookup(("met",))) == 1
    assert len(english.lookup(("wrote", "a", "paper"))) == 1
    assert english.lookup(("zebra",)) == []
