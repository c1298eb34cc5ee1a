"""Subprocess front-end to an SMT-LIB2 solver.

The default solver is the bundled one; point DSCORE_SMT (or the
``solver_cmd`` argument) at any SMT-LIB2-speaking binary to swap it out.
"""

import os
import shlex
import subprocess
import sys

from ..errors import SolverError
from .solver import sexpr

SAT, UNSAT, UNKNOWN = "sat", "unsat", "unknown"


def default_command():
    env = os.environ.get("DSCORE_SMT")
    if env:
        return shlex.split(env)
    return [sys.executable, "-m", "dscore.smt.solver.main"]


def _parse_value(tok: str) -> int:
    if tok.startswith("#x"):
        return int(tok[2:], 16)
    if tok.startswith("#b"):
        return int(tok[2:], 2)
    if tok == "true":
        return 1
    if tok == "false":
        return 0
    raise SolverError(f"unparseable model value {tok!r}")


def parse_model(text: str) -> dict:
    """Extract name -> integer from a get-model response."""
    model = {}
    for form in sexpr.parse_all(text):
        if not isinstance(form, list):
            continue
        entries = form
        if form and form[0] == "model":
            entries = form[1:]
        for entry in entries:
            if (isinstance(entry, list) and len(entry) >= 5
                    and entry[0] == "define-fun" and entry[2] == []):
                model[entry[1]] = _parse_value(entry[4])
    return model


def solve(script: str, solver_cmd=None, timeout: float = 300.0):
    """Run the solver on a script; returns (status, model dict)."""
    cmd = list(solver_cmd) if solver_cmd else default_command()
    try:
        proc = subprocess.run(cmd, input=script, capture_output=True,
                              text=True, timeout=timeout)
    except FileNotFoundError as ex:
        raise SolverError(f"solver not found: {cmd[0]!r}") from ex
    except subprocess.TimeoutExpired as ex:
        raise SolverError(f"solver timed out after {timeout}s") from ex
    out = proc.stdout
    lines = [ln.strip() for ln in out.splitlines() if ln.strip()]
    status = None
    for ln in lines:
        if ln in (SAT, UNSAT, UNKNOWN):
            status = ln
            break
    if status is None:
        detail = out.strip() or proc.stderr.strip() or f"exit code {proc.returncode}"
        raise SolverError(f"no verdict from solver: {detail[:500]}")
    model = {}
    if status == SAT:
        tail = out.split(status, 1)[1]
        try:
            model = parse_model(tail)
        except (sexpr.SexprError, SolverError):
            model = {}
    return status, model
