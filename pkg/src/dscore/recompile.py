"""Syntax gate: drive a C compiler through bounded iterative fix-ups.

Each iteration reassembles the source from the accumulated action set
(so the transform is idempotent and deterministic), compiles it to an
object file, and derives new actions from the diagnostics. No new
action means the failure is genuine.
"""

import os
import re
import shlex
import subprocess
import sys
import tempfile
from dataclasses import dataclass, field

from .errors import ToolError

DECLARE_VAR = "declare-undefined-variable"
INJECT_HEADER = "inject-header"
DEFINE_TYPEDEFS = "define-intrinsic-typedefs"
REWRITE_PSEUDO = "rewrite-pseudo-op-to-helper"
DECLARE_EXTERN = "declare-missing-extern-function"

SUCCESS, FAILURE, TOOL_ERROR = "success", "failure", "tool-error"

HEADER_ALLOW_LIST = ("stdio.h", "stdlib.h", "string.h", "stdint.h")

_HEADER_SYMBOLS = {
    "stdio.h": {"printf", "fprintf", "sprintf", "snprintf", "puts", "fputs",
                "fgets", "putchar", "putc", "fputc", "getchar", "fopen",
                "fclose", "fread", "fwrite", "fflush", "stdin", "stdout",
                "stderr"},
    "stdlib.h": {"NULL", "malloc", "calloc", "realloc", "free", "exit", "abort",
                 "atoi", "atol", "abs", "labs", "qsort", "getenv"},
    "string.h": {"memcpy", "memmove", "memset", "memcmp", "strlen", "strcmp",
                 "strncmp", "strcpy", "strncpy", "strcat", "strchr", "strstr",
                 "strdup"},
}

_INTRINSIC_TYPES = {
    "undefined", "undefined1", "undefined2", "undefined3", "undefined4",
    "undefined5", "undefined6", "undefined7", "undefined8",
    "byte", "uchar", "ushort", "uint", "ulong", "code", "bool",
}

_TYPEDEF_PRELUDE = """\
typedef unsigned char undefined;
typedef unsigned char undefined1;
typedef unsigned short undefined2;
typedef unsigned int undefined3;
typedef unsigned int undefined4;
typedef unsigned long undefined5;
typedef unsigned long undefined6;
typedef unsigned long undefined7;
typedef unsigned long undefined8;
typedef unsigned char byte;
typedef unsigned char uchar;
typedef unsigned short ushort;
typedef unsigned int uint;
typedef unsigned long ulong;
typedef void code;
typedef int bool;
"""

_PSEUDO_RE = re.compile(r"^(CONCAT|SUB)(\d)(\d)$")


@dataclass(frozen=True, order=True)
class FixupAction:
    kind: str
    payload: str = ""


@dataclass
class HarnessConfig:
    compiler_cmd: list = None
    max_iterations: int = 10
    compile_timeout: float = 30.0
    temp_root: str = None

    def resolved_command(self):
        if self.compiler_cmd:
            return list(self.compiler_cmd)
        env = os.environ.get("DSCORE_CC")
        if env:
            return shlex.split(env)
        return ["gcc", "-c", "-Werror=implicit-function-declaration"]


@dataclass
class CompileOutcome:
    status: str
    iterations_used: int
    transformed_source: str
    diagnostics: list              # (line, message)
    actions: tuple = ()

    def to_json(self):
        return {
            "status": self.status,
            "iterations_used": self.iterations_used,
            "diagnostics": [{"line": ln, "message": msg}
                            for ln, msg in self.diagnostics],
            "actions": [{"kind": a.kind, "payload": a.payload}
                        for a in self.actions],
        }


_DIAG_RE = re.compile(r"^[^:\n]+:(\d+):(\d+): (?:fatal )?error: (.*)$", re.M)
_UNDECLARED_RE = re.compile(r"['\u2018]([A-Za-z_][A-Za-z0-9_]*)['\u2019] undeclared")
_UNKNOWN_TYPE_RE = re.compile(r"unknown type name ['\u2018]([A-Za-z_][A-Za-z0-9_]*)['\u2019]")
_IMPLICIT_RE = re.compile(r"implicit declaration of function ['\u2018]([A-Za-z_][A-Za-z0-9_]*)['\u2019]")


def _pseudo_helper(payload: str) -> str:
    m = _PSEUDO_RE.match(payload)
    op, n, mlen = m.group(1), int(m.group(2)), int(m.group(3))
    if op == "CONCAT":
        lo_mask = (1 << (8 * mlen)) - 1
        hi_mask = (1 << (8 * n)) - 1
        return (f"static unsigned long {payload}(unsigned long hi, unsigned long lo)"
                f" {{ return ((hi & 0x{hi_mask:x}UL) << {8 * mlen}) | (lo & 0x{lo_mask:x}UL); }}")
    out_mask = (1 << (8 * mlen)) - 1
    src_mask = (1 << (8 * n)) - 1 if n < 8 else (1 << 64) - 1
    return (f"static unsigned long {payload}(unsigned long src, unsigned long k)"
            f" {{ return ((src & 0x{src_mask:x}UL) >> (8 * k)) & 0x{out_mask:x}UL; }}")


def assemble(src: str, actions) -> str:
    """Rebuild the translation unit from the original source and action set."""
    headers = sorted({a.payload for a in actions if a.kind == INJECT_HEADER},
                     key=lambda h: HEADER_ALLOW_LIST.index(h))
    prelude = [f"#include <{h}>" for h in headers]
    if any(a.kind == DEFINE_TYPEDEFS for a in actions):
        prelude.append(_TYPEDEF_PRELUDE.rstrip("\n"))
    for a in sorted(actions):
        if a.kind == REWRITE_PSEUDO:
            prelude.append(_pseudo_helper(a.payload))
        elif a.kind == DECLARE_EXTERN:
            prelude.append(f"extern long {a.payload}();")
    body = src
    local_decls = sorted(a.payload for a in actions if a.kind == DECLARE_VAR)
    if local_decls:
        brace = body.find("{")
        if brace < 0:
            raise ToolError("source has no function body to patch")
        inject = "".join(f" long {name};" for name in local_decls)
        body = body[:brace + 1] + inject + body[brace + 1:]
    if prelude:
        return "\n".join(prelude) + "\n\n" + body
    return body


def derive_actions(diagnostics, src: str):
    """Map compiler errors to fix-up actions."""
    out = set()
    for _line, message in diagnostics:
        m = _UNKNOWN_TYPE_RE.search(message)
        if m:
            name = m.group(1)
            if name in _INTRINSIC_TYPES:
                out.add(FixupAction(DEFINE_TYPEDEFS))
            elif re.fullmatch(r"u?int(8|16|32|64)_t|size_t|intptr_t|uintptr_t",
                              name):
                out.add(FixupAction(INJECT_HEADER, "stdint.h"))
            continue
        m = _IMPLICIT_RE.search(message)
        if m:
            name = m.group(1)
            if _PSEUDO_RE.match(name):
                out.add(FixupAction(REWRITE_PSEUDO, name))
            else:
                header = next((h for h, syms in _HEADER_SYMBOLS.items()
                               if name in syms), None)
                if header:
                    out.add(FixupAction(INJECT_HEADER, header))
                else:
                    out.add(FixupAction(DECLARE_EXTERN, name))
            continue
        m = _UNDECLARED_RE.search(message)
        if m:
            name = m.group(1)
            if name in _INTRINSIC_TYPES:
                out.add(FixupAction(DEFINE_TYPEDEFS))
                continue
            header = next((h for h, syms in _HEADER_SYMBOLS.items()
                           if name in syms), None)
            if header:
                out.add(FixupAction(INJECT_HEADER, header))
            elif re.search(rf"\b{re.escape(name)}\s*\(", src):
                out.add(FixupAction(DECLARE_EXTERN, name))
            else:
                out.add(FixupAction(DECLARE_VAR, name))
    return out


def _parse_diagnostics(stderr: str):
    return [(int(m.group(1)), m.group(3).strip())
            for m in _DIAG_RE.finditer(stderr)]


def recompile(src: str, cfg: HarnessConfig = None) -> CompileOutcome:
    if cfg is None:
        cfg = HarnessConfig()
    cmd = cfg.resolved_command()
    actions = set()
    diagnostics = []
    transformed = src
    with tempfile.TemporaryDirectory(dir=cfg.temp_root, prefix="dscore-cc-") as scratch:
        c_path = os.path.join(scratch, "unit.c")
        o_path = os.path.join(scratch, "unit.o")
        for iteration in range(1, cfg.max_iterations + 1):
            transformed = assemble(src, actions)
            with open(c_path, "w") as fh:
                fh.write(transformed)
            try:
                proc = subprocess.run(cmd + [c_path, "-o", o_path],
                                      capture_output=True, text=True,
                                      timeout=cfg.compile_timeout)
            except FileNotFoundError as ex:
                raise ToolError(f"compiler not found: {cmd[0]!r}") from ex
            except subprocess.TimeoutExpired as ex:
                raise ToolError(f"compiler timed out after {cfg.compile_timeout}s") from ex
            if proc.returncode < 0:
                raise ToolError(f"compiler killed by signal {-proc.returncode}")
            if proc.returncode == 0:
                return CompileOutcome(SUCCESS, iteration, transformed, [],
                                      tuple(sorted(actions)))
            diagnostics = _parse_diagnostics(proc.stderr)
            if not diagnostics and proc.returncode != 0:
                raise ToolError(f"compiler failed without parseable diagnostics: "
                                f"{proc.stderr.strip()[:500]}")
            new_actions = derive_actions(diagnostics, src) - actions
            if not new_actions:
                return CompileOutcome(FAILURE, iteration, transformed,
                                      diagnostics, tuple(sorted(actions)))
            actions |= new_actions
    return CompileOutcome(FAILURE, cfg.max_iterations, transformed, diagnostics,
                          tuple(sorted(actions)))


def syntax_score(outcome: CompileOutcome, penalties=None) -> float:
    if outcome.status == TOOL_ERROR:
        raise ValueError("tool-error outcomes are unscorable, not penalized")
    syn_pen = -3.0 if penalties is None else penalties.syn_pen
    return syn_pen if outcome.status == FAILURE else 0.0
