"""Structural source metrics used for dataset filtering and call modeling."""

from collections import Counter
from dataclasses import dataclass, field

from . import ast as A
from .lexer import tokenize


@dataclass
class SourceMetrics:
    effective_lines: int
    cyclomatic_complexity: int
    token_count: int
    external_call_names: Counter = field(default_factory=Counter)


def cyclomatic_complexity(fn: A.FunctionAst) -> int:
    """Decision points + 1 over the function AST."""
    points = 0
    for node in A.walk(fn):
        if isinstance(node, (A.If, A.While, A.DoWhile, A.Ternary)):
            points += 1
        elif isinstance(node, A.For):
            points += 1
        elif isinstance(node, A.Binary) and node.op in ("&&", "||"):
            points += 1
        elif isinstance(node, A.Switch):
            points += sum(1 for lit, _ in node.cases if lit is not None)
    return points + 1


def collect_external_calls(fn: A.FunctionAst) -> Counter:
    """Multiset of call-site callee names with no local definition.

    Argument lists are deliberately ignored; only names are collected.
    """
    counts = Counter()
    for node in A.walk(fn):
        if isinstance(node, A.Call) and node.callee != fn.name:
            counts[node.callee] += 1
    return counts


def effective_lines(src: str) -> int:
    return sum(1 for line in src.splitlines() if line.strip())


def compute_metrics(fn: A.FunctionAst, src: str) -> SourceMetrics:
    toks = tokenize(src)
    return SourceMetrics(
        effective_lines=effective_lines(src),
        cyclomatic_complexity=cyclomatic_complexity(fn),
        token_count=len(toks) - 1,
        external_call_names=collect_external_calls(fn),
    )
