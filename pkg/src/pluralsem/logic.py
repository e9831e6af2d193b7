"""Builtin many-sorted higher-order signature and the formula simplifier.

The simplifier implements exactly four rewrite families, applied
congruently to a fixpoint: cardinality of enumerated sets, comparison of
numeral literals, truth-value absorption for conjunction, and discharge
of true antecedents.  A formula that simplifies to `false` is a blocked
reading.
"""

from __future__ import annotations

from .kernel import (
    App,
    Arrow,
    Base,
    Const,
    IllTyped,
    KernelError,
    Lam,
    Pi,
    Signature,
    Term,
    TyApp,
    TyLam,
    TyVar,
    TypingContext,
    Var,
    is_numeral,
    type_of,
)
from .syntax import pretty_term

T = Base("t")
E = Base("e")
G = Base("g")
N = Base("N")

TRUE = Const("true")
FALSE = Const("false")

BUILTIN_SORTS = ("e", "g", "t", "N")


def _a(name: str = "a") -> TyVar:
    return TyVar(name)


def builtin_signature() -> Signature:
    """The fixed logical signature shared by every lexicon."""
    a = _a()
    bool2 = Arrow(T, Arrow(T, T))
    pred = Arrow(a, T)
    constants = {
        "true": T,
        "false": T,
        "and": bool2,
        "or": bool2,
        "implies": bool2,
        "not": Arrow(T, T),
        "eq": Pi("a", Arrow(a, Arrow(a, T))),
        "forall": Pi("a", Arrow(pred, T)),
        "exists": Pi("a", Arrow(pred, T)),
        "iota": Pi("a", Arrow(pred, a)),
        "card": Pi("a", Arrow(pred, N)),
        "gt": Arrow(N, Arrow(N, T)),
        "member": Arrow(G, Arrow(E, T)),
        "member_of": Arrow(E, Arrow(G, T)),
        "oplus": Arrow(G, Arrow(G, G)),
        "subset": Pi("a", Arrow(pred, Arrow(pred, T))),
        "polyand": Pi(
            "a",
            Pi(
                "b",
                Arrow(
                    Arrow(_a("a"), T),
                    Arrow(
                        Arrow(_a("b"), T),
                        Pi(
                            "c",
                            Arrow(
                                _a("c"),
                                Arrow(
                                    Arrow(_a("c"), _a("a")),
                                    Arrow(Arrow(_a("c"), _a("b")), T),
                                ),
                            ),
                        ),
                    ),
                ),
            ),
        ),
    }
    return Signature(constants, frozenset(BUILTIN_SORTS))


class _NotEnumeration(Exception):
    pass


def card_of_enumeration(p: Term) -> int | None:
    """Count the members of `lam y. (y == c1) || ... || (y == cn)`.

    Returns n when the disjuncts name pairwise-distinct constants (the
    unique-names assumption), None for anything else.
    """
    if not isinstance(p, Lam):
        return None
    names: list[str] = []

    def walk(t: Term) -> None:
        match t:
            case App(App(Const("or"), left), right):
                walk(left)
                walk(right)
            case App(App(TyApp(Const("eq"), _), Var(v)), Const(c)) if v == p.var:
                names.append(c)
            case _:
                raise _NotEnumeration

    try:
        walk(p.body)
    except _NotEnumeration:
        return None
    if len(set(names)) != len(names):
        return None
    return len(names)


def _rewrite(term: Term) -> Term:
    """One bottom-up rewrite pass."""

    def rules(t: Term) -> Term:
        match t:
            case App(TyApp(Const("card"), _), p):
                n = card_of_enumeration(p)
                if n is not None:
                    return Const(str(n))
            case App(App(Const("gt"), Const(m)), Const(n)) if is_numeral(m) and is_numeral(n):
                return TRUE if int(m) > int(n) else FALSE
            case App(App(Const("and"), l), r):
                if l == TRUE:
                    return r
                if r == TRUE:
                    return l
                if l == FALSE or r == FALSE:
                    return FALSE
            case App(App(Const("implies"), l), r):
                if l == TRUE:
                    return r
        return t

    def go(t: Term) -> Term:
        match t:
            case App(fn, arg):
                return rules(App(go(fn), go(arg)))
            case Lam(x, ty, body):
                return Lam(x, ty, go(body))
            case TyApp(fn, ty):
                return rules(TyApp(go(fn), ty))
            case TyLam(a, body):
                return TyLam(a, go(body))
            case _:
                return rules(t)

    return go(term)


def simplify(term: Term, sig: Signature) -> Term:
    """Fixpoint of the four rewrite rules; preserves the term's type."""
    try:
        type_of(TypingContext(sig), term)
    except KernelError as exc:
        raise IllTyped(str(exc)) from exc
    while True:
        out = _rewrite(term)
        if out == term:
            return out
        term = out


def is_blocked(formula: Term) -> bool:
    """True exactly when a simplified reading collapsed to `false`."""
    return formula == FALSE


def pretty(formula: Term, unicode: bool = False) -> str:
    return pretty_term(formula, unicode=unicode)
