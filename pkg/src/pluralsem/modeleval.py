"""Brute-force finite-model evaluation for the target logic.

Models interpret every entity sort by a finite domain, groups by ids
related to entities only through a membership relation, and higher types
by the full (finite) function space.  Evaluation is standard; quantifiers
range over enumerated domains, so formula truth, entailment between
readings, and the group-union equivalence are all decidable here.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

from .kernel import (
    App,
    Arrow,
    Base,
    Const,
    Lam,
    Pi,
    Signature,
    Term,
    TyApp,
    TyLam,
    Type,
    Var,
    is_numeral,
)

DEFAULT_N_BOUND = 8
_DOMAIN_CAP = 1_000_000


class EvalError(Exception):
    pass


class UninterpretedConstant(EvalError):
    pass


class SortOverflow(EvalError):
    pass


class EmptyIota(EvalError):
    pass


class NonGroundTerm(EvalError):
    pass


class VocabularyTooRich(EvalError):
    pass


@dataclass(frozen=True)
class FrozenFunc:
    """A function value as an explicit finite graph, in domain order.

    Equality is structural, so a lambda evaluated over a domain matches
    the corresponding graph enumerated for that domain.
    """

    entries: tuple[tuple[object, object], ...]

    @cached_property
    def _table(self) -> dict:
        return dict(self.entries)

    def apply(self, x: object) -> object:
        try:
            return self._table[x]
        except (KeyError, TypeError):
            pass
        for arg, val in self.entries:
            if arg is x or arg == x:
                return val
        raise EvalError(f"argument {x!r} outside function domain")


class _Curry:
    """A lazily applied builtin; never compared for equality directly."""

    __slots__ = ("fn",)

    def __init__(self, fn):
        self.fn = fn

    def apply(self, x: object) -> object:
        return self.fn(x)


Value = object  # str | int | bool | FrozenFunc | _Curry


def apply_value(f: Value, x: Value) -> Value:
    if isinstance(f, (FrozenFunc, _Curry)):
        return f.apply(x)
    raise EvalError(f"cannot apply non-function value {f!r}")


@dataclass
class FiniteModel:
    """Finite domains per sort plus constant interpretations.

    `member_rel` must be total on the group domain; two groups may share
    the same member set (groups are not extensional).
    """

    domains: dict[str, tuple[str, ...]]
    member_rel: dict[str, frozenset[str]] = field(default_factory=dict)
    interp: dict[str, Value] = field(default_factory=dict)
    n_bound: int = DEFAULT_N_BOUND
    _enum_cache: dict = field(default_factory=dict, repr=False, compare=False)

    def domain(self, sort: str) -> tuple[str, ...]:
        return self.domains.get(sort, ())


def enum_domain(model: FiniteModel, ty: Type) -> list[Value]:
    """Every value of `ty`, in a deterministic order (cached per model;
    domains and the N bound are fixed after construction)."""
    cached = model._enum_cache.get(ty)
    if cached is not None:
        return cached
    values = _enum_domain_uncached(model, ty)
    model._enum_cache[ty] = values
    return values


def _enum_domain_uncached(model: FiniteModel, ty: Type) -> list[Value]:
    match ty:
        case Base("t"):
            return [False, True]
        case Base("N"):
            return list(range(model.n_bound + 1))
        case Base(name):
            return list(model.domain(name))
        case Arrow(dom, cod):
            dom_vals = enum_domain(model, dom)
            cod_vals = enum_domain(model, cod)
            count = len(cod_vals) ** len(dom_vals) if dom_vals else 1
            if count > _DOMAIN_CAP:
                raise EvalError(f"function space {ty!r} too large to enumerate")
            out = []
            for image in itertools.product(cod_vals, repeat=len(dom_vals)):
                out.append(FrozenFunc(tuple(zip(dom_vals, image))))
            return out
        case _:
            raise NonGroundTerm(f"cannot enumerate type {ty!r}")


def semantic_eq(model: FiniteModel, ty: Type, a: Value, b: Value) -> bool:
    """Extensional equality at `ty` (function values compare pointwise)."""
    if isinstance(ty, Arrow):
        return all(
            semantic_eq(model, ty.cod, apply_value(a, d), apply_value(b, d))
            for d in enum_domain(model, ty.dom)
        )
    return a == b


def _builtin(model: FiniteModel, name: str) -> Value | None:
    mr = model.member_rel
    match name:
        case "true":
            return True
        case "false":
            return False
        case "and":
            return _Curry(lambda p: _Curry(lambda q: p and q))
        case "or":
            return _Curry(lambda p: _Curry(lambda q: p or q))
        case "implies":
            return _Curry(lambda p: _Curry(lambda q: (not p) or q))
        case "not":
            return _Curry(lambda p: not p)
        case "gt":
            return _Curry(lambda m: _Curry(lambda n: m > n))
        case "member":
            return _Curry(lambda g: _Curry(lambda e: e in mr[g]))
        case "member_of":
            return _Curry(lambda e: _Curry(lambda g: e in mr[g]))
    return None


def _instantiated_builtin(model: FiniteModel, name: str, ty: Type) -> Value | None:
    match name:
        case "eq":
            return _Curry(lambda a: _Curry(lambda b: semantic_eq(model, ty, a, b)))
        case "forall":
            return _Curry(
                lambda p: all(bool(apply_value(p, d)) for d in enum_domain(model, ty))
            )
        case "exists":
            return _Curry(
                lambda p: any(bool(apply_value(p, d)) for d in enum_domain(model, ty))
            )
        case "card":

            def count(p):
                n = sum(1 for d in enum_domain(model, ty) if apply_value(p, d))
                if n > model.n_bound:
                    raise SortOverflow(f"cardinality {n} exceeds N bound {model.n_bound}")
                return n

            return _Curry(count)
        case "iota":

            def choose(p):
                for d in enum_domain(model, ty):
                    if apply_value(p, d):
                        return d
                raise EmptyIota("iota applied to an empty extension")

            return _Curry(choose)
        case "subset":
            return _Curry(
                lambda p: _Curry(
                    lambda q: all(
                        (not apply_value(p, d)) or bool(apply_value(q, d))
                        for d in enum_domain(model, ty)
                    )
                )
            )
    return None


def eval_term(model: FiniteModel, term: Term, env: dict[str, Value] | None = None) -> Value:
    """Evaluate a closed, monomorphic term; formulas yield a bool."""
    env = env or {}

    def go(t: Term, env: dict[str, Value]) -> Value:
        match t:
            case Var(name):
                if name not in env:
                    raise EvalError(f"unbound variable {name!r}")
                return env[name]
            case Const(name):
                if is_numeral(name):
                    n = int(name)
                    if n > model.n_bound:
                        raise SortOverflow(f"numeral {n} exceeds N bound {model.n_bound}")
                    return n
                builtin = _builtin(model, name)
                if builtin is not None:
                    return builtin
                if name in model.interp:
                    return model.interp[name]
                raise UninterpretedConstant(f"constant {name!r} has no interpretation")
            case TyApp(Const(name), ty):
                value = _instantiated_builtin(model, name, ty)
                if value is None:
                    raise UninterpretedConstant(
                        f"no model semantics for {name!r} at type {ty!r}"
                    )
                return value
            case App(fn, arg):
                return apply_value(go(fn, env), go(arg, env))
            case Lam(x, ty, body):
                return FrozenFunc(
                    tuple((d, go(body, {**env, x: d})) for d in enum_domain(model, ty))
                )
            case TyApp() | TyLam():
                raise NonGroundTerm(f"residual polymorphism in {t!r}")
        raise TypeError(t)

    return go(term, env)


def eval_formula(model: FiniteModel, formula: Term) -> bool:
    value = eval_term(model, formula)
    if not isinstance(value, bool):
        raise EvalError(f"formula evaluated to non-boolean {value!r}")
    return value


# ------------------------------------------------------- model enumeration


def _subsets(items: tuple[str, ...]) -> list[frozenset[str]]:
    out = []
    for mask in range(1 << len(items)):
        out.append(frozenset(items[i] for i in range(len(items)) if mask >> i & 1))
    return out


def enumerate_models(
    bounds: dict[str, int],
    vocab: dict[str, Type],
    n_bound: int = DEFAULT_N_BOUND,
    cap: int = 200_000,
):
    """All models with the given exact domain sizes, streamed in a fixed
    order: membership assignments vary fastest, then each vocabulary
    constant in name order."""
    e_size = bounds.get("e", 0)
    g_size = bounds.get("g", 0)
    domains = {
        "e": tuple(f"a{i + 1}" for i in range(e_size)),
        "g": tuple(f"G{i + 1}" for i in range(g_size)),
    }
    for sort, size in bounds.items():
        if sort not in ("e", "g"):
            domains[sort] = tuple(f"{sort}{i + 1}" for i in range(size))
    probe = FiniteModel(domains, {g: frozenset() for g in domains["g"]}, {}, n_bound)
    member_choices = _subsets(domains["e"])
    names = sorted(vocab)
    value_spaces = [enum_domain(probe, vocab[name]) for name in names]
    total = len(member_choices) ** g_size
    for space in value_spaces:
        total *= len(space)
    if total > cap:
        raise VocabularyTooRich(f"{total} models exceed the cap of {cap}")
    for member_assignment in itertools.product(member_choices, repeat=g_size):
        member_rel = dict(zip(domains["g"], member_assignment))
        for values in itertools.product(*value_spaces):
            yield FiniteModel(
                dict(domains), dict(member_rel), dict(zip(names, values)), n_bound
            )


def entails(
    bounds: dict[str, int],
    vocab: dict[str, Type],
    phi: Term,
    psi: Term,
    n_bound: int = DEFAULT_N_BOUND,
) -> bool:
    """True iff psi holds in every enumerated model satisfying phi."""
    for model in enumerate_models(bounds, vocab, n_bound):
        if eval_formula(model, phi) and not eval_formula(model, psi):
            return False
    return True


# --------------------------------------------------- group-union machinery


def check_member_oplus(model: FiniteModel) -> bool:
    """Does group union satisfy member(g1 + g2) = member(g1) or member(g2)?"""
    op = model.interp.get("oplus")
    if op is None:
        raise UninterpretedConstant("model does not interpret oplus")
    for g1 in model.domain("g"):
        for g2 in model.domain("g"):
            joined = apply_value(apply_value(op, g1), g2)
            if model.member_rel[joined] != model.member_rel[g1] | model.member_rel[g2]:
                return False
    return True


def make_link_model(n_entities: int, n_bound: int = DEFAULT_N_BOUND) -> FiniteModel:
    """The lattice-style model: one group per nonempty entity set, with
    union as the join.  Satisfies the member/union equivalence by
    construction."""
    entities = tuple(f"a{i + 1}" for i in range(n_entities))
    masks = list(range(1, 1 << n_entities))
    group_of = {mask: f"G{mask}" for mask in masks}
    member_rel = {
        group_of[mask]: frozenset(
            entities[i] for i in range(n_entities) if mask >> i & 1
        )
        for mask in masks
    }
    oplus = FrozenFunc(
        tuple(
            (
                group_of[m1],
                FrozenFunc(
                    tuple((group_of[m2], group_of[m1 | m2]) for m2 in masks)
                ),
            )
            for m1 in masks
        )
    )
    return FiniteModel(
        {"e": entities, "g": tuple(group_of[m] for m in masks)},
        member_rel,
        {"oplus": oplus},
        n_bound,
    )


# ------------------------------------------------------------- model files


def load_model(text: str, sig: Signature, n_bound: int = DEFAULT_N_BOUND) -> FiniteModel:
    """Parse the line-based model format.

    `dom <sort> = elems`, `mem <group> = elems`, `interp <const> = ...`
    where the interpretation syntax is keyed to the constant's type: an
    element name, an integer, a list of elements for a predicate, or
    brace-wrapped sets (`{a b} {a c}`) for a predicate over sets.
    """
    domains: dict[str, tuple[str, ...]] = {}
    member_rel: dict[str, frozenset[str]] = {}
    raw_interp: list[tuple[str, list[str], int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "dom" and len(parts) >= 3 and parts[2] == "=":
            domains[parts[1]] = tuple(parts[3:])
        elif parts[0] == "mem" and len(parts) >= 3 and parts[2] == "=":
            member_rel[parts[1]] = frozenset(parts[3:])
        elif parts[0] == "interp" and len(parts) >= 3 and parts[2] == "=":
            raw_interp.append((parts[1], parts[3:], lineno))
        else:
            raise EvalError(f"line {lineno}: cannot parse model line {raw!r}")
    for group in domains.get("g", ()):
        member_rel.setdefault(group, frozenset())
    model = FiniteModel(domains, member_rel, {}, n_bound)
    for name, tokens, lineno in raw_interp:
        ty = sig.type_of_const(name)
        if ty is None:
            raise EvalError(f"line {lineno}: unknown constant {name!r}")
        model.interp[name] = _decode_value(model, ty, tokens, lineno)
    return model


def _decode_value(model: FiniteModel, ty: Type, tokens: list[str], lineno: int) -> Value:
    match ty:
        case Base("N"):
            return int(tokens[0])
        case Base(name):
            if len(tokens) != 1 or tokens[0] not in model.domain(name):
                raise EvalError(f"line {lineno}: expected one element of sort {name}")
            return tokens[0]
        case Arrow(Base(sort), Base("t")):
            extension = set(tokens)
            stray = extension - set(model.domain(sort))
            if stray:
                raise EvalError(f"line {lineno}: {sorted(stray)} not in domain of {sort}")
            return FrozenFunc(
                tuple((d, d in extension) for d in enum_domain(model, Base(sort)))
            )
        case Arrow(Arrow(Base(sort), Base("t")), Base("t")):
            sets: list[frozenset[str]] = []
            current: list[str] | None = None
            for tok in tokens:
                if tok.startswith("{"):
                    current = []
                    tok = tok[1:]
                if tok.endswith("}"):
                    if current is None:
                        raise EvalError(f"line {lineno}: unbalanced braces")
                    if tok[:-1]:
                        current.append(tok[:-1])
                    sets.append(frozenset(current))
                    current = None
                elif tok:
                    if current is None:
                        raise EvalError(f"line {lineno}: expected '{{'")
                    current.append(tok)
            if current is not None:
                raise EvalError(f"line {lineno}: unbalanced braces")

            def as_extension(fn: FrozenFunc) -> frozenset[str]:
                return frozenset(d for d, v in fn.entries if v)

            return FrozenFunc(
                tuple(
                    (fn, as_extension(fn) in sets)
                    for fn in enum_domain(model, Arrow(Base(sort), Base("t")))
                )
            )
        case _:
            raise EvalError(f"line {lineno}: cannot decode a value of type {ty!r}")


def load_model_path(path: str | Path, sig: Signature, n_bound: int = DEFAULT_N_BOUND) -> FiniteModel:
    return load_model(Path(path).read_text(encoding="utf-8"), sig, n_bound)
