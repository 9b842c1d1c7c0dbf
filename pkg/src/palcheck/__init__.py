"""Bounded model checking for public announcement logic with relativized common knowledge."""
from .checker import (Countermodel, Scope, Semantics, ValidUpToBound, check_rule, check_valid,
                      run_axiom_suite, run_faithfulness, run_substitution_suite)
from .direct import announce, eval_direct, extension
from .formula import (CK, RCK, TOP, And, Announce, Atom, Everyone, Formula, Iff, Imp, Knows, Neg, Or,
                      ParseError, Top, parse, render)
from .model import EpistemicModel, FrameClass, Relation, load_model, restrict, tc
from .sse import eval_sse, tvalid_naive, vld_in_model

__all__ = [
    "CK", "RCK", "TOP", "And", "Announce", "Atom", "Countermodel", "EpistemicModel", "Everyone",
    "Formula", "FrameClass", "Iff", "Imp", "Knows", "Neg", "Or", "ParseError", "Relation", "Scope",
    "Semantics", "Top", "ValidUpToBound", "announce", "check_rule", "check_valid", "eval_direct",
    "eval_sse", "extension", "load_model", "parse", "render", "restrict", "run_axiom_suite",
    "run_faithfulness", "run_substitution_suite", "tc", "tvalid_naive", "vld_in_model",
]
