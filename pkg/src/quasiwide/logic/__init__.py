"""First-order logic over finite relational structures."""

from .evaluate import UnboundVariable, compile_formula, evaluate, models
from .formula import (
    BOTTOM,
    TOP,
    And,
    Atom,
    Const,
    Eq,
    Exists,
    Falsum,
    Forall,
    Formula,
    Not,
    Or,
    Var,
    Verum,
    atom,
    conj,
    disj,
    eq,
    free_vars,
    implies,
    is_existential_positive,
    normalize,
    quantifier_rank,
    substitute,
    to_text,
)
from .locality import (
    BasicLocalSentence,
    adjacency_formula,
    basic_local_sentence,
    dist_formula,
    relativize,
)
from .parser import ParseError, load_formula, parse

__all__ = [name for name in dir() if not name.startswith("_")]
