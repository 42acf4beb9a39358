"""Execution-time opacity control for timed automata."""

from ._etopaq import Automaton, ParseError, check, exists, minsky, simulate, solve

__all__ = ["Automaton", "ParseError", "check", "exists", "minsky", "simulate", "solve"]
