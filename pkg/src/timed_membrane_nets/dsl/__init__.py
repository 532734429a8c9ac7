"""Text formats for membrane systems and Petri nets."""

from .lexer import SourceSpan, Token, TokenKind, tokenize
from .loader import dump_model, load_file, load_model
from .parser import parse_model, parse_petri, parse_psystem
from .printer import print_model, print_petri, print_psystem

__all__ = [
    "SourceSpan",
    "Token",
    "TokenKind",
    "dump_model",
    "load_file",
    "load_model",
    "parse_model",
    "parse_petri",
    "parse_psystem",
    "print_model",
    "print_petri",
    "print_psystem",
    "tokenize",
]
