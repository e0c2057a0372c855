"""Automata with advice: string and tree machines that read a fixed infinite advice tape."""

from advicer.advice import (AdviceStream, AdviceTree, Alphabet, DepthPeriodicTree, PeriodicStream, TableTree,
                            UniformTree, advice_at, catalog_stream, parse_stream, parse_tree_advice, periodic,
                            stream_prefix, tree_advice_at)
from advicer.automata import (BLANK, MullerAutomaton, RunTrace, TermAutomaton, accepts_terminating,
                              empty_string_accept_set, run_bounded, run_nonterminating, run_terminating)
from advicer.errors import (AdviceError, AlphabetError, BoundViolationError, ContractError, DegenerateMachineError,
                            DepthInsufficientError, FormatError, SizeError, UnsupportedAdviceError)

__version__ = "0.1.0"

__all__ = [
    "AdviceStream", "AdviceTree", "Alphabet", "DepthPeriodicTree", "PeriodicStream", "TableTree", "UniformTree",
    "advice_at", "catalog_stream", "parse_stream", "parse_tree_advice", "periodic", "stream_prefix",
    "tree_advice_at", "BLANK", "MullerAutomaton", "RunTrace", "TermAutomaton", "accepts_terminating",
    "empty_string_accept_set", "run_bounded", "run_nonterminating", "run_terminating", "AdviceError",
    "AlphabetError", "BoundViolationError", "ContractError", "DegenerateMachineError", "DepthInsufficientError",
    "FormatError", "SizeError", "UnsupportedAdviceError",
]
