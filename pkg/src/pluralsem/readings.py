"""Semantic composition over derivations, with lexical coercions.

Each leaf contributes its bare term plus one coerced variant per listed
word-local coercion; at application nodes, a failed application may be
rescued by wrapping the argument in one layer of a global coercion.
Traces record which coercion fired on which word span, rigidity prunes
incompatible traces, and the surviving formulas are simplified,
deduplicated up to alpha-equivalence, and labelled.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from .grammar import BwdApp, DerivationTree, FwdApp, Leaf, parse, tokenize
from .kernel import (
    Base,
    KernelError,
    Term,
    Type,
    alpha_eq,
    instantiate_and_apply,
    normalize,
    type_of,
    types_equal,
)
from .lexicon import LexEntry, Lexicon
from .logic import is_blocked, pretty, simplify

log = logging.getLogger(__name__)

Span = tuple[int, int]
Trace = tuple[tuple[Span, str], ...]


@dataclass(frozen=True)
class Candidate:
    """A composed term with the coercions that produced it."""

    term: Term
    type: Type
    trace: Trace


@dataclass(frozen=True)
class Reading:
    """A normalized, simplified formula with provenance and felicity."""

    formula: Term
    trace: Trace
    labels: frozenset[str]
    blocked: bool

# canonical label vocabulary, keyed on the coercion names of the shipped
# lexicons: * distributes, c covers, # collects over sets of sets
_DISTRIBUTIVE = {"star", "*"}
_COVERING = {"c"}
_COLLECTIVE = {"hash", "#"}
_VERB_COERCIONS = _DISTRIBUTIVE | _COVERING | _COLLECTIVE
_GROUP_LIFTERS = {"grpflat", "grpsets"}

LABEL_ORDER = ("collective", "distributive", "covering", "group-lift")


def label(trace: Trace) -> frozenset[str]:
    """Reading labels determined by the coercions in the trace."""
    names = {name for _, name in trace}
    labels: set[str] = set()
    if names & _DISTRIBUTIVE:
        labels.add("distributive")
    if names & _COVERING:
        labels.add("covering")
    if names & _COLLECTIVE:
        labels.add("collective")
    if not names & _VERB_COERCIONS:
        labels.add("collective")
    if names & _GROUP_LIFTERS:
        labels.add("group-lift")
    return frozenset(labels)


def rigidity_check(trace: Trace, rigid_names: frozenset[str]) -> bool:
    """False iff some word occurrence carries two distinct coercions of
    which at least one is rigid."""
    by_occ: dict[Span, set[str]] = {}
    for occ, name in trace:
        by_occ.setdefault(occ, set()).add(name)
    for names in by_occ.values():
        if len(names) >= 2 and names & rigid_names:
            return False
    return True


def _occ_count(trace: Trace, occ: Span) -> int:
    return sum(1 for o, _ in trace if o == occ)


def leaf_candidates(
    entry: LexEntry, lex: Lexicon, span: Span = (0, 1), budget: int = 1
) -> list[Candidate]:
    """The bare term plus one coerced variant per applicable local coercion.

    Coercions whose type does not fit are skipped silently (logged); the
    budget caps coercion applications per word occurrence, and coercions
    are never stacked on a single occurrence at the leaf level.
    """
    if entry.term is None:
        return []
    ctx = lex.context()
    out = [Candidate(entry.term, type_of(ctx, entry.term), ())]
    if budget < 1:
        return out
    for name in entry.coercions:
        co = lex.coercions.get(name)
        if co is None:
            continue
        try:
            coerced = normalize(instantiate_and_apply(co.term, entry.term, ctx), ctx)
            out.append(Candidate(coerced, type_of(ctx, coerced), ((span, name),)))
        except KernelError as exc:
            log.debug("coercion %s inapplicable to %r: %s", name, entry.form, exc)
    return out


def compose(node: DerivationTree, lex: Lexicon, budget: int = 1) -> list[Candidate]:
    """All well-typed semantic candidates for a derivation subtree."""
    ctx = lex.context()

    def go(n: DerivationTree) -> list[Candidate]:
        match n:
            case Leaf(entry, _, start, end):
                return leaf_candidates(entry, lex, (start, end), budget)
            case FwdApp(functor, arg, _, _, _):
                return combine(go(functor), go(arg), (arg.start, arg.end))
            case BwdApp(arg, functor, _, _, _):
                return combine(go(functor), go(arg), (arg.start, arg.end))
        raise TypeError(n)

    def combine(
        fs: list[Candidate], args: list[Candidate], arg_span: Span
    ) -> list[Candidate]:
        out: list[Candidate] = []
        for fc in fs:
            for ac in args:
                trace = fc.trace + ac.trace
                try:
                    term = normalize(instantiate_and_apply(fc.term, ac.term, ctx), ctx)
                    out.append(Candidate(term, type_of(ctx, term), trace))
                    continue
                except KernelError:
                    pass
                # argument-side rescue: one layer of a global coercion
                for co in lex.global_coercions():
                    if _occ_count(trace, arg_span) >= budget:
                        break
                    try:
                        wrapped = normalize(
                            instantiate_and_apply(co.term, ac.term, ctx), ctx
                        )
                        term = normalize(
                            instantiate_and_apply(fc.term, wrapped, ctx), ctx
                        )
                    except KernelError:
                        continue
                    out.append(
                        Candidate(
                            term,
                            type_of(ctx, term),
                            trace + ((arg_span, co.name),),
                        )
                    )
        return out

    return go(node)


def enumerate_readings(sentence: str, lex: Lexicon, budget: int = 1) -> list[Reading]:
    """Parse, compose, filter by rigidity, simplify, dedup, label, order.

    Raises UnknownToken or NoParse; returns [] when every composition is
    type-incoherent (no reading at all, as opposed to a blocked one).
    """
    tokens = tokenize(sentence, lex)
    trees = parse(tokens, lex)
    rigid = lex.rigid_names()
    sig = lex.signature
    prop = Base("t")
    collected: list[tuple[Term, Trace]] = []
    for tree in trees:
        for cand in compose(tree, lex, budget):
            if not types_equal(cand.type, prop):
                log.debug("dropping non-propositional candidate of type %r", cand.type)
                continue
            if not rigidity_check(cand.trace, rigid):
                continue
            collected.append((simplify(cand.term, sig), cand.trace))
    collected.sort(key=lambda it: (is_blocked(it[0]), len(it[1]), pretty(it[0])))
    readings: list[Reading] = []
    for formula, trace in collected:
        if any(alpha_eq(formula, r.formula) for r in readings):
            continue
        readings.append(Reading(formula, trace, label(trace), is_blocked(formula)))
    return readings
