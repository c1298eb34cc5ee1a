from .ast import CType, FunctionAst, pretty_print, to_json
from .lexer import Token, tokenize
from .metrics import SourceMetrics, collect_external_calls, compute_metrics, cyclomatic_complexity
from .parser import parse_function

__all__ = [
    "CType", "FunctionAst", "Token", "SourceMetrics",
    "parse_function", "tokenize", "pretty_print", "to_json",
    "compute_metrics", "collect_external_calls", "cyclomatic_complexity",
]
