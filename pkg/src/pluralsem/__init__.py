"""Plural readings from a polymorphic lambda-calculus lexicon.

Sentences are parsed with an AB categorial grammar; each word contributes
a typed term plus optional coercions, and every well-typed combination
becomes a candidate reading.  Readings simplify to many-sorted
higher-order formulas, are labelled collective / distributive / covering,
and can be checked against exhaustively enumerated finite models.
"""

from .grammar import NoParse, UnknownToken, parse, tokenize
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
    TyVar,
    Type,
    TypingContext,
    Var,
    alpha_eq,
    instantiate_and_apply,
    normalize,
    type_of,
)
from .lexicon import Lexicon, derive_plural, load, load_path, packaged_lexicon_path, validate
from .logic import builtin_signature, card_of_enumeration, is_blocked, pretty, simplify
from .modeleval import (
    FiniteModel,
    check_member_oplus,
    entails,
    enumerate_models,
    eval_formula,
    load_model,
    make_link_model,
)
from .readings import Reading, compose, enumerate_readings, label, leaf_candidates, rigidity_check
from .syntax import parse_term, parse_type, pretty_term, pretty_type

__version__ = "0.1.0"
