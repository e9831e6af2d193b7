from __future__ import annotations

import pytest

from pluralsem.grammar import (
    BwdApp,
    CatAtom,
    FwdApp,
    Leaf,
    Left,
    NoParse,
    Right,
    UnknownToken,
    check_tree,
    parse,
    parse_cat,
    tokenize,
)


# ---------------------------------------------------------------- categories


def test_cat_surface_syntax():
    assert parse_cat("np\\s") == Left(CatAtom("np"), CatAtom("s"))
    assert parse_cat("(np\\np)/np") == Right(Left(CatAtom("np"), CatAtom("np")), CatAtom("np"))
    assert parse_cat("(s/(np\\s))/n") == Right(
        Right(CatAtom("s"), Left(CatAtom("np"), CatAtom("s"))), CatAtom("n")
    )


def test_cat_slashes_left_associative():
    assert parse_cat("n\\n/np") == Right(Left(CatAtom("n"), CatAtom("n")), CatAtom("np"))


# ----------------------------------------------------------------- tokenizer


def test_tokenize_simple(english):
    toks = tokenize("Jimi and Dusty met.", english)
    assert [t.words for t in toks] == [("jimi",), ("and",), ("dusty",), ("met",)]


def test_tokenize_prefers_longest_match(english):
    toks = tokenize("Jimi and Dusty wrote a paper", english)
    assert [t.words for t in toks] == [
        ("jimi",),
        ("and",),
        ("dusty",),
        ("wrote", "a", "paper"),
    ]
    assert toks[-1].start == 3 and toks[-1].end == 6


def test_tokenize_unknown_token_position(english):
    with pytest.raises(UnknownToken) as info:
        tokenize("Jimi blorped", english)
    assert info.value.token == "blorped"
    assert info.value.position == 2


def test_tokenize_is_case_insensitive(japanese):
    toks = tokenize("JIMI tachi ha saikai shita", japanese)
    assert [t.words for t in toks] == [("jimi",), ("tachi",), ("ha",), ("saikai", "shita")]


# -------------------------------------------------------------------- parser


def leaf_forms(tree):
    match tree:
        case Leaf(entry, _, _, _):
            return [entry.form]
        case FwdApp(functor, arg, _, _, _):
            return leaf_forms(functor) + leaf_forms(arg)
        case BwdApp(arg, functor, _, _, _):
            return leaf_forms(arg) + leaf_forms(functor)


def shape(tree):
    match tree:
        case Leaf(entry, cat, _, _):
            return (entry.form, repr(cat))
        case FwdApp(functor, arg, _, _, _):
            return ("fwd", shape(functor), shape(arg))
        case BwdApp(arg, functor, _, _, _):
            return ("bwd", shape(arg), shape(functor))


def test_conjunction_sentence_has_one_derivation(english):
    trees = parse(tokenize("Jimi and Dusty met", english), english)
    assert len(trees) == 1
    assert shape(trees[0]) == (
        "bwd",
        ("bwd", ("Jimi", "np"), ("fwd", ("and", "(np\\np)/np"), ("Dusty", "np"))),
        ("met", "np\\s"),
    )
    assert check_tree(trees[0])


def test_determiner_sentence(english):
    trees = parse(tokenize("the committee met", english), english)
    assert len(trees) == 1
    assert check_tree(trees[0])


def test_quantifier_sentence_parses_even_if_semantics_blocks(english):
    trees = parse(tokenize("each student met", english), english)
    assert len(trees) == 1
    assert shape(trees[0])[0] == "fwd"


def test_no_parse(english):
    with pytest.raises(NoParse):
        parse(tokenize("met Jimi", english), english)


def test_derivations_are_sound(english):
    for sentence in [
        "Jimi and Dusty met",
        "the students met",
        "each student sneezed",
        "the members of the committee protested",
    ]:
        for tree in parse(tokenize(sentence, english), english):
            assert check_tree(tree)


# ------------------------------------------- brute-force completeness oracle


def brute_force(tokens, lex):
    """Every s-rooted tree over all bracketings and entry choices."""

    def all_trees(i, j):
        if j == i + 1:
            tok = tokens[i]
            return [Leaf(e, e.cat, tok.start, tok.end) for e in lex.lookup(tok.words)]
        out = []
        for k in range(i + 1, j):
            for left in all_trees(i, k):
                for right in all_trees(k, j):
                    if isinstance(left.cat, Right) and left.cat.arg == right.cat:
                        out.append(FwdApp(left, right, left.cat.result, left.start, right.end))
                    if isinstance(right.cat, Left) and right.cat.arg == left.cat:
                        out.append(BwdApp(left, right, right.cat.result, left.start, right.end))
        return out

    return [t for t in all_trees(0, len(tokens)) if t.cat == CatAtom("s")]


@pytest.mark.parametrize(
    "sentence",
    [
        "Jimi met",
        "Jimi and Dusty met",
        "the students met",
        "each student sneezed",
        "Jimi and Dusty wrote a paper",
        "the members of the committee protested",
        "the committees met",
    ],
)
def test_cyk_matches_brute_force_enumeration(english, sentence):
    tokens = tokenize(sentence, english)
    assert len(tokens) <= 6
    cyk = parse(tokens, english)
    brute = brute_force(tokens, english)
    assert sorted(map(shape, cyk)) == sorted(map(shape, brute))
