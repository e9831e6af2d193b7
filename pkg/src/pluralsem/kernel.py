"""Second-order lambda-calculus kernel: types, terms, typing, reduction.

Everything here is immutable and purely functional.  Bound variables are
named; substitution is capture-avoiding via fresh renaming, and
alpha-equivalence is the semantic notion of term identity throughout the
package.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field


class KernelError(Exception):
    """Base class for typing and reduction failures."""


class UnboundName(KernelError):
    pass


class ApplicationMismatch(KernelError):
    pass


class NotAPi(KernelError):
    pass


class TyLamEscape(KernelError):
    pass


class NoInstantiation(KernelError):
    pass


class IllTyped(KernelError):
    pass


# ------------------------------------------------------------------ types


@dataclass(frozen=True, slots=True)
class Base:
    """A base sort (entity sorts, groups, propositions, naturals)."""

    name: str

    def __repr__(self) -> str:
        return self.name


@dataclass(frozen=True, slots=True)
class TyVar:
    name: str

    def __repr__(self) -> str:
        return self.name


@dataclass(frozen=True, slots=True)
class Arrow:
    dom: "Type"
    cod: "Type"

    def __repr__(self) -> str:
        return f"({self.dom!r} -> {self.cod!r})"


@dataclass(frozen=True, slots=True)
class Pi:
    """Universal quantification over types."""

    var: str
    body: "Type"

    def __repr__(self) -> str:
        return f"(Pi {self.var}. {self.body!r})"


Type = Base | TyVar | Arrow | Pi


# ------------------------------------------------------------------ terms


@dataclass(frozen=True, slots=True)
class Var:
    name: str

    def __repr__(self) -> str:
        return self.name


@dataclass(frozen=True, slots=True)
class Const:
    """A signature constant; digit strings are the naturals."""

    name: str

    def __repr__(self) -> str:
        return self.name


@dataclass(frozen=True, slots=True)
class App:
    fn: "Term"
    arg: "Term"

    def __repr__(self) -> str:
        return f"({self.fn!r} {self.arg!r})"


@dataclass(frozen=True, slots=True)
class Lam:
    var: str
    var_type: Type
    body: "Term"

    def __repr__(self) -> str:
        return f"(lam {self.var}:{self.var_type!r}. {self.body!r})"


@dataclass(frozen=True, slots=True)
class TyApp:
    fn: "Term"
    ty: Type

    def __repr__(self) -> str:
        return f"({self.fn!r}{{{self.ty!r}}})"


@dataclass(frozen=True, slots=True)
class TyLam:
    var: str
    body: "Term"

    def __repr__(self) -> str:
        return f"(Lam {self.var}. {self.body!r})"


Term = Var | Const | App | Lam | TyApp | TyLam


_fresh_counter = itertools.count()


def fresh_name(base: str = "x") -> str:
    """A name guaranteed distinct from every name produced so far."""
    return f"{base}_{next(_fresh_counter)}"


def is_numeral(name: str) -> bool:
    return name.isdigit()


# ------------------------------------------------------------- signature


@dataclass(frozen=True, eq=False)
class Signature:
    """Constant typings plus the declared base sorts.

    Numeral constants 0, 1, 2, ... are implicitly typed at the `N` sort
    and are never stored explicitly.
    """

    constants: dict[str, Type] = field(default_factory=dict)
    sorts: frozenset[str] = frozenset()

    def type_of_const(self, name: str) -> Type | None:
        if is_numeral(name):
            return Base("N")
        return self.constants.get(name)

    def __contains__(self, name: str) -> bool:
        return self.type_of_const(name) is not None

    def extended(self, sorts=(), constants=()) -> Signature:
        """A copy with extra sorts and constants; rejects redeclarations."""
        new_sorts = set(self.sorts)
        for s in sorts:
            if s in new_sorts:
                raise ValueError(f"sort {s!r} already declared")
            new_sorts.add(s)
        new_consts = dict(self.constants)
        for name, ty in constants:
            if name in self.constants or is_numeral(name):
                raise ValueError(f"constant {name!r} already declared")
            new_consts[name] = ty
        return Signature(new_consts, frozenset(new_sorts))


@dataclass(frozen=True)
class TypingContext:
    """Term-variable bindings, in-scope type variables, ambient signature."""

    sig: Signature
    vars: tuple[tuple[str, Type], ...] = ()
    tyvars: frozenset[str] = frozenset()

    def bind(self, name: str, ty: Type) -> TypingContext:
        return TypingContext(self.sig, self.vars + ((name, ty),), self.tyvars)

    def bind_tyvar(self, name: str) -> TypingContext:
        return TypingContext(self.sig, self.vars, self.tyvars | {name})

    def var_type(self, name: str) -> Type | None:
        for n, ty in reversed(self.vars):
            if n == name:
                return ty
        return None


# --------------------------------------------------------- free variables


def free_type_vars(ty: Type) -> frozenset[str]:
    match ty:
        case Base():
            return frozenset()
        case TyVar(name):
            return frozenset({name})
        case Arrow(dom, cod):
            return free_type_vars(dom) | free_type_vars(cod)
        case Pi(var, body):
            return free_type_vars(body) - {var}
    raise TypeError(ty)


def free_vars(term: Term) -> frozenset[str]:
    match term:
        case Var(name):
            return frozenset({name})
        case Const():
            return frozenset()
        case App(fn, arg):
            return free_vars(fn) | free_vars(arg)
        case Lam(var, _, body):
            return free_vars(body) - {var}
        case TyApp(fn, _):
            return free_vars(fn)
        case TyLam(_, body):
            return free_vars(body)
    raise TypeError(term)


def free_type_vars_in_term(term: Term) -> frozenset[str]:
    match term:
        case Var() | Const():
            return frozenset()
        case App(fn, arg):
            return free_type_vars_in_term(fn) | free_type_vars_in_term(arg)
        case Lam(_, var_type, body):
            return free_type_vars(var_type) | free_type_vars_in_term(body)
        case TyApp(fn, ty):
            return free_type_vars_in_term(fn) | free_type_vars(ty)
        case TyLam(var, body):
            return free_type_vars_in_term(body) - {var}
    raise TypeError(term)


def constants_of(term: Term) -> frozenset[str]:
    match term:
        case Var():
            return frozenset()
        case Const(name):
            return frozenset({name})
        case App(fn, arg):
            return constants_of(fn) | constants_of(arg)
        case Lam(_, _, body) | TyLam(_, body):
            return constants_of(body)
        case TyApp(fn, _):
            return constants_of(fn)
    raise TypeError(term)


# ------------------------------------------------------------ substitution


def subst_type(ty: Type, var: str, repl: Type) -> Type:
    """Capture-avoiding substitution of `repl` for `var` in `ty`."""
    match ty:
        case Base():
            return ty
        case TyVar(name):
            return repl if name == var else ty
        case Arrow(dom, cod):
            return Arrow(subst_type(dom, var, repl), subst_type(cod, var, repl))
        case Pi(v, body):
            if v == var:
                return ty
            if v in free_type_vars(repl) and var in free_type_vars(body):
                nv = fresh_name("a")
                body = subst_type(body, v, TyVar(nv))
                v = nv
            return Pi(v, subst_type(body, var, repl))
    raise TypeError(ty)


def subst(term: Term, var: str, repl: Term) -> Term:
    """Capture-avoiding substitution of `repl` for the term variable `var`."""
    match term:
        case Var(name):
            return repl if name == var else term
        case Const():
            return term
        case App(fn, arg):
            return App(subst(fn, var, repl), subst(arg, var, repl))
        case Lam(x, ty, body):
            if x == var:
                return term
            if x in free_vars(repl) and var in free_vars(body):
                nx = fresh_name("x")
                body = subst(body, x, Var(nx))
                x = nx
            return Lam(x, ty, subst(body, var, repl))
        case TyApp(fn, ty):
            return TyApp(subst(fn, var, repl), ty)
        case TyLam(a, body):
            if a in free_type_vars_in_term(repl) and var in free_vars(body):
                na = fresh_name("a")
                body = subst_type_in_term(body, a, TyVar(na))
                a = na
            return TyLam(a, subst(body, var, repl))
    raise TypeError(term)


def subst_type_in_term(term: Term, var: str, repl: Type) -> Term:
    """Substitute a type for a type variable throughout a term."""
    match term:
        case Var() | Const():
            return term
        case App(fn, arg):
            return App(subst_type_in_term(fn, var, repl), subst_type_in_term(arg, var, repl))
        case Lam(x, ty, body):
            return Lam(x, subst_type(ty, var, repl), subst_type_in_term(body, var, repl))
        case TyApp(fn, ty):
            return TyApp(subst_type_in_term(fn, var, repl), subst_type(ty, var, repl))
        case TyLam(a, body):
            if a == var:
                return term
            if a in free_type_vars(repl) and var in free_type_vars_in_term(body):
                na = fresh_name("a")
                body = subst_type_in_term(body, a, TyVar(na))
                a = na
            return TyLam(a, subst_type_in_term(body, var, repl))
    raise TypeError(term)


# ----------------------------------------------------------------- typing


def types_equal(a: Type, b: Type) -> bool:
    """Structural equality of types up to renaming of Pi-bound variables."""
    match (a, b):
        case (Base(x), Base(y)):
            return x == y
        case (TyVar(x), TyVar(y)):
            return x == y
        case (Arrow(d1, c1), Arrow(d2, c2)):
            return types_equal(d1, d2) and types_equal(c1, c2)
        case (Pi(v1, b1), Pi(v2, b2)):
            marker = TyVar(fresh_name("@"))
            return types_equal(subst_type(b1, v1, marker), subst_type(b2, v2, marker))
        case _:
            return False


def check_type(ctx: TypingContext, ty: Type) -> None:
    """Well-formedness: declared sorts and in-scope type variables only."""
    match ty:
        case Base(name):
            if name not in ctx.sig.sorts:
                raise UnboundName(f"unknown sort {name!r}")
        case TyVar(name):
            if name not in ctx.tyvars:
                raise UnboundName(f"unbound type variable {name!r}")
        case Arrow(dom, cod):
            check_type(ctx, dom)
            check_type(ctx, cod)
        case Pi(var, body):
            check_type(ctx.bind_tyvar(var), body)
        case _:
            raise TypeError(ty)


def type_of(ctx: TypingContext, term: Term) -> Type:
    """The unique type of `term`, or a KernelError explaining why none exists."""
    match term:
        case Var(name):
            ty = ctx.var_type(name)
            if ty is None:
                raise UnboundName(f"unbound variable {name!r}")
            return ty
        case Const(name):
            ty = ctx.sig.type_of_const(name)
            if ty is None:
                raise UnboundName(f"unknown constant {name!r}")
            return ty
        case App(fn, arg):
            fn_ty = type_of(ctx, fn)
            arg_ty = type_of(ctx, arg)
            if not isinstance(fn_ty, Arrow):
                raise ApplicationMismatch(f"cannot apply term of type {fn_ty!r}")
            if not types_equal(fn_ty.dom, arg_ty):
                raise ApplicationMismatch(
                    f"operand type {arg_ty!r} does not match domain {fn_ty.dom!r}"
                )
            return fn_ty.cod
        case Lam(x, ty, body):
            check_type(ctx, ty)
            return Arrow(ty, type_of(ctx.bind(x, ty), body))
        case TyApp(fn, ty):
            check_type(ctx, ty)
            fn_ty = type_of(ctx, fn)
            if not isinstance(fn_ty, Pi):
                raise NotAPi(f"type application on term of type {fn_ty!r}")
            return subst_type(fn_ty.body, fn_ty.var, ty)
        case TyLam(a, body):
            for x in free_vars(body):
                x_ty = ctx.var_type(x)
                if x_ty is not None and a in free_type_vars(x_ty):
                    raise TyLamEscape(
                        f"type variable {a!r} is free in the type of free variable {x!r}"
                    )
            return Pi(a, type_of(ctx.bind_tyvar(a), body))
    raise TypeError(term)


# -------------------------------------------------------------- reduction


def _whnf(term: Term) -> Term:
    while True:
        match term:
            case App(fn, arg):
                head = _whnf(fn)
                if isinstance(head, Lam):
                    term = subst(head.body, head.var, arg)
                    continue
                return App(head, arg)
            case TyApp(fn, ty):
                head = _whnf(fn)
                if isinstance(head, TyLam):
                    term = subst_type_in_term(head.body, head.var, ty)
                    continue
                return TyApp(head, ty)
            case _:
                return term


def _nf_normal(term: Term) -> Term:
    while True:
        match term:
            case App(fn, arg):
                head = _whnf(fn)
                if isinstance(head, Lam):
                    term = subst(head.body, head.var, arg)
                    continue
                return App(_nf_normal(head), _nf_normal(arg))
            case TyApp(fn, ty):
                head = _whnf(fn)
                if isinstance(head, TyLam):
                    term = subst_type_in_term(head.body, head.var, ty)
                    continue
                return TyApp(_nf_normal(head), ty)
            case Lam(x, ty, body):
                return Lam(x, ty, _nf_normal(body))
            case TyLam(a, body):
                return TyLam(a, _nf_normal(body))
            case _:
                return term


def _nf_applicative(term: Term) -> Term:
    match term:
        case App(fn, arg):
            fn = _nf_applicative(fn)
            arg = _nf_applicative(arg)
            if isinstance(fn, Lam):
                return _nf_applicative(subst(fn.body, fn.var, arg))
            return App(fn, arg)
        case TyApp(fn, ty):
            fn = _nf_applicative(fn)
            if isinstance(fn, TyLam):
                return _nf_applicative(subst_type_in_term(fn.body, fn.var, ty))
            return TyApp(fn, ty)
        case Lam(x, ty, body):
            return Lam(x, ty, _nf_applicative(body))
        case TyLam(a, body):
            return TyLam(a, _nf_applicative(body))
        case _:
            return term


def normalize(term: Term, ctx: TypingContext, strategy: str = "normal") -> Term:
    """Beta + type-beta normal form of a well-typed term.

    Refuses ill-typed input; termination is guaranteed by strong
    normalization, and the result is independent of `strategy`.
    """
    try:
        type_of(ctx, term)
    except KernelError as exc:
        raise IllTyped(str(exc)) from exc
    if strategy == "normal":
        return _nf_normal(term)
    if strategy == "applicative":
        return _nf_applicative(term)
    raise ValueError(f"unknown strategy {strategy!r}")


# ------------------------------------------------------- alpha-equivalence


def alpha_eq(a: Term, b: Term) -> bool:
    """Equality up to consistent renaming of bound term and type variables."""
    match (a, b):
        case (Var(x), Var(y)):
            return x == y
        case (Const(x), Const(y)):
            return x == y
        case (App(f1, a1), App(f2, a2)):
            return alpha_eq(f1, f2) and alpha_eq(a1, a2)
        case (Lam(x1, t1, b1), Lam(x2, t2, b2)):
            if not types_equal(t1, t2):
                return False
            marker = Var(fresh_name("@"))
            return alpha_eq(subst(b1, x1, marker), subst(b2, x2, marker))
        case (TyApp(f1, t1), TyApp(f2, t2)):
            return alpha_eq(f1, f2) and types_equal(t1, t2)
        case (TyLam(a1, b1), TyLam(a2, b2)):
            marker = TyVar(fresh_name("@"))
            return alpha_eq(
                subst_type_in_term(b1, a1, marker), subst_type_in_term(b2, a2, marker)
            )
        case _:
            return False


# -------------------------------------------------- matching/instantiation


def match_type(pattern: Type, target: Type, flex: frozenset[str]) -> dict[str, Type] | None:
    """First-order match of `pattern` against `target`.

    Only variables in `flex` may be bound; all other type variables are
    rigid.  Returns the substitution, or None if matching fails.
    """
    out: dict[str, Type] = {}

    def go(p: Type, t: Type, forbidden: frozenset[str]) -> bool:
        match (p, t):
            case (TyVar(name), _) if name in flex:
                if free_type_vars(t) & forbidden:
                    return False
                if name in out:
                    return types_equal(out[name], t)
                out[name] = t
                return True
            case (Base(x), Base(y)):
                return x == y
            case (TyVar(x), TyVar(y)):
                return x == y
            case (Arrow(d1, c1), Arrow(d2, c2)):
                return go(d1, d2, forbidden) and go(c1, c2, forbidden)
            case (Pi(v1, b1), Pi(v2, b2)):
                m = fresh_name("@")
                return go(
                    subst_type(b1, v1, TyVar(m)),
                    subst_type(b2, v2, TyVar(m)),
                    forbidden | {m},
                )
            case _:
                return False

    return out if go(pattern, target, frozenset()) else None


def instantiate_and_apply(f: Term, a: Term, ctx: TypingContext) -> Term:
    """Apply `f` to `a`, instantiating f's leading Pi-binders by matching
    the resulting domain type against a's type.

    Returns the (unnormalized) application; raises NoInstantiation when the
    domain does not match, ApplicationMismatch when f is not a function.
    """
    f_ty = type_of(ctx, f)
    a_ty = type_of(ctx, a)
    binders: list[str] = []
    body = f_ty
    while isinstance(body, Pi):
        nv = fresh_name("a")
        body = subst_type(body.body, body.var, TyVar(nv))
        binders.append(nv)
    if not isinstance(body, Arrow):
        raise ApplicationMismatch(f"cannot apply term of type {f_ty!r}")
    solution = match_type(body.dom, a_ty, frozenset(binders))
    if solution is None:
        raise NoInstantiation(f"argument type {a_ty!r} does not match domain {body.dom!r}")
    missing = [v for v in binders if v not in solution]
    if missing:
        raise NoInstantiation("domain match leaves type arguments undetermined")
    out: Term = f
    for v in binders:
        out = TyApp(out, solution[v])
    return App(out, a)
