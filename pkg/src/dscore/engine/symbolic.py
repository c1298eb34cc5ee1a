"""Path-exploring symbolic executor for the decompiled-C subset.

External calls return a configurable constant (0 by default) and are
counted per path; loops unroll up to a bound, after which a symbolic
loop condition is assumed false (bounded-exit) and a concrete-true one
marks the exploration incomplete.
"""

import time
from collections import Counter
from dataclasses import dataclass, field

from ..errors import EngineFailure
from ..frontend import ast as A
from . import symval as V

NEXT, RETURN, BREAK, CONTINUE, GOTO = "next", "return", "break", "continue", "goto"


@dataclass
class EngineConfig:
    unroll_bound: int = 32
    timeout_seconds: float = 30.0
    external_return_value: int = 0
    max_paths: int = 256
    max_steps: int = 500_000


class AllocationRegistry:
    """Deterministic fresh-address allocator shared across model builds.

    Keys are canonical term strings; both the reference and the candidate
    resolve the same pointer chain to the same region.
    """

    BASE = 0x1_0000_0000
    STRIDE = 0x10_0000

    def __init__(self):
        self.bases: dict[str, int] = {}

    def base_for(self, key: str) -> int:
        found = self.bases.get(key)
        if found is None:
            found = self.BASE + len(self.bases) * self.STRIDE
            self.bases[key] = found
        return found


@dataclass
class SymbolicModel:
    function_name: str
    param_widths: list
    return_width: int            # 0 for void
    ret_tree: object             # SymValue or None for void
    count_trees: dict            # name -> SymValue (width 16)
    paths: list                  # (path_condition, ret SymValue|None, counts dict)
    assumptions: list            # allocation-binding equalities
    explored_complete: bool = True
    bounded: bool = False

    @property
    def is_void(self) -> bool:
        return self.return_width == 0

    def to_json(self):
        return {
            "function": self.function_name,
            "return_width": self.return_width,
            "explored_complete": self.explored_complete,
            "bounded": self.bounded,
            "paths": [
                {
                    "index": i,
                    "condition": repr(pc),
                    "return": repr(ret) if ret is not None else None,
                    "counts": dict(counts),
                }
                for i, (pc, ret, counts) in enumerate(self.paths)
            ],
        }


COUNT_WIDTH = 16


class _State:
    __slots__ = ("env", "memory", "trace", "assumptions", "bindings", "counts")

    def __init__(self):
        self.env = {}
        self.memory = {}
        self.trace = []            # (cond SymValue width1, taken bool)
        self.assumptions = []
        self.bindings = {}
        self.counts = Counter()

    def fork(self):
        child = _State.__new__(_State)
        child.env = dict(self.env)
        child.memory = dict(self.memory)
        child.trace = list(self.trace)
        child.assumptions = list(self.assumptions)
        child.bindings = dict(self.bindings)
        child.counts = Counter(self.counts)
        return child


def _common_type(a: A.CType, b: A.CType) -> A.CType:
    wa, wb = a.value_width, b.value_width
    w = max(32, wa, wb)
    unsigned = False
    for t, tw in ((a, wa), (b, wb)):
        if tw == w and (t.kind == "unsigned-int" or t.is_pointer or t.kind == "code-address"):
            unsigned = True
    return A.CType("unsigned-int" if unsigned else "signed-int", w)


def _is_signed_value(t: A.CType) -> bool:
    return t.is_signed


class Engine:
    """One symbolic run over a single function; not reusable."""

    def __init__(self, fn: A.FunctionAst, ground_truth_calls, cfg: EngineConfig,
                 registry: AllocationRegistry | None = None):
        self.fn = fn
        self.ground_truth = set(ground_truth_calls)
        self.cfg = cfg
        self.registry = registry if registry is not None else AllocationRegistry()
        self.deadline = time.monotonic() + cfg.timeout_seconds
        self.steps = 0
        self.forks = 0
        self.explored_complete = True
        self.bounded = False
        self.ret_width = 0 if fn.return_type.is_void else fn.return_type.value_width

    # --- bookkeeping ---

    def _tick(self):
        self.steps += 1
        if self.steps % 512 == 0 and time.monotonic() > self.deadline:
            raise EngineFailure(EngineFailure.TIMEOUT, "symbolic execution budget exhausted")
        if self.steps > self.cfg.max_steps:
            raise EngineFailure(EngineFailure.TIMEOUT, "step budget exhausted")

    def _check_paths(self, n):
        if n > self.cfg.max_paths:
            raise EngineFailure(EngineFailure.PATH_EXPLOSION, f"more than {self.cfg.max_paths} paths")

    # --- memory ---

    def _alloc(self, state, key: str) -> int:
        return self.registry.base_for(key)

    def _concretize(self, state, sv):
        """Resolve an address expression to a concrete 64-bit address."""
        sv = V.substitute(sv, state.bindings)
        if sv.is_const:
            return sv.value
        term, offset = _split_base(sv)
        bound = state.bindings.get(term)
        if bound is None:
            base = self._alloc(state, repr(term))
            bound = V.const(base, 64)
            state.bindings[term] = bound
            # the concretization choice only holds on paths that reach
            # this dereference, so guard it with the current trace
            guard = V.TRUE
            for cond, taken in state.trace:
                guard = V.land(guard, cond if taken else V.lnot(cond))
            state.assumptions.append(V.lor(V.lnot(guard), V.eq(term, bound)))
        return (bound.value + offset) & V.mask(64)

    def _load(self, state, addr: int, width: int):
        parts = []
        for k in range(width // 8):
            byte = state.memory.get(addr + k)
            if byte is None:
                byte = V.sym(f"mem_{addr + k:x}", 8)
            parts.append(byte)
        out = parts[0]
        for byte in parts[1:]:
            out = V.concat(byte, out)
        return out

    def _store(self, state, addr: int, value):
        for k in range(value.width // 8):
            state.memory[addr + k] = V.extract(value, 8 * k + 7, 8 * k)

    # --- expression evaluation; every eval returns [(state, sv, ctype)] ---

    def eval(self, state, e):
        self._tick()
        method = getattr(self, "_eval_" + type(e).__name__, None)
        if method is None:
            raise EngineFailure(EngineFailure.UNSUPPORTED, f"expression {e.kind}")
        return method(state, e)

    def _eval_IntLit(self, state, e):
        return [(state, V.const(e.value, e.ctype.value_width), e.ctype)]

    def _eval_StrLit(self, state, e):
        base = self._alloc(state, f"str:{e.value!r}")
        return [(state, V.const(base, 64), A.I8.pointer_to())]

    def _eval_Ident(self, state, e):
        slot = state.env.get(e.name)
        if slot is None:
            # unresolved external global; same symbol in every model
            return [(state, V.sym(f"glob_{e.name}", 64), A.I64)]
        tag = slot[0]
        if tag == "val":
            return [(state, slot[1], slot[2])]
        _, addr, ctype, array_len = slot
        if array_len:
            return [(state, V.const(addr, 64), ctype.pointer_to())]
        return [(state, self._load(state, addr, ctype.value_width), ctype)]

    def _eval_SizeofType(self, state, e):
        n = e.ctype.sizeof() * (e.array_len or 1)
        return [(state, V.const(n, 64), A.U64)]

    def _eval_SizeofExpr(self, state, e):
        n = self._static_sizeof(state, e.expr)
        return [(state, V.const(n, 64), A.U64)]

    def _static_sizeof(self, state, e) -> int:
        if isinstance(e, A.Ident):
            slot = state.env.get(e.name)
            if slot is None:
                return 8
            if slot[0] == "mem" and slot[3]:
                return slot[2].sizeof() * slot[3]
            ctype = slot[2]
            return ctype.sizeof()
        if isinstance(e, A.Cast):
            return e.ctype.sizeof()
        if isinstance(e, A.IntLit):
            return e.ctype.sizeof()
        raise EngineFailure(EngineFailure.UNSUPPORTED, "sizeof of complex expression")

    def _eval_Cast(self, state, e):
        out = []
        for s, sv, ct in self.eval(state, e.expr):
            target_w = e.ctype.value_width
            out.append((s, V.resize(sv, target_w, _is_signed_value(ct)), e.ctype))
        return out

    def _eval_Comma(self, state, e):
        results = [(state, V.const(0, 32), A.I32)]
        for part in e.parts:
            nxt = []
            for s, _, _ in results:
                nxt.extend(self.eval(s, part))
            results = nxt
        return results

    def _eval_Call(self, state, e):
        if e.callee == self.fn.name:
            raise EngineFailure(EngineFailure.UNSUPPORTED, "recursion")
        states = [state]
        for arg in e.args:
            nxt = []
            for s in states:
                for s2, _, _ in self.eval(s, arg):
                    nxt.append(s2)
            states = nxt
        name = e.callee if e.callee in self.ground_truth else "other"
        out = []
        for s in states:
            s.counts[name] += 1
            out.append((s, V.const(self.cfg.external_return_value, 64), A.I64))
        return out

    def _eval_ConcatOp(self, state, e):
        out = []
        for s, hi, hct in self.eval(state, e.hi):
            for s2, lo, lct in self.eval(s, e.lo):
                hi_v = V.resize(hi, e.hi_bytes * 8, False)
                lo_v = V.resize(lo, e.lo_bytes * 8, False)
                width = (e.hi_bytes + e.lo_bytes) * 8
                if width > 64:
                    raise EngineFailure(EngineFailure.UNSUPPORTED, "concat wider than 64 bits")
                out.append((s2, V.concat(hi_v, lo_v), A.CType("unsigned-int", width)))
        return out

    def _eval_ExtractOp(self, state, e):
        out = []
        for s, src, _ in self.eval(state, e.src):
            for s2, off, _ in self.eval(s, e.offset):
                src_v = V.resize(src, e.src_bytes * 8, False)
                shifted = V.lshr(src_v, V.resize(V.mul(off, V.const(8, off.width)),
                                                 src_v.width, False))
                width = e.out_bytes * 8
                out.append((s2, V.truncate(shifted, width), A.CType("unsigned-int", width)))
        return out

    def _eval_Ternary(self, state, e):
        out = []
        for s, cv, _ in self.eval(state, e.cond):
            cond = V.substitute(V.bool_value(cv), s.bindings)
            if cond.is_const:
                out.extend(self.eval(s, e.then if cond.value else e.other))
                continue
            st, sf = self._fork(s, cond)
            out.extend(self.eval(st, e.then))
            out.extend(self.eval(sf, e.other))
        return out

    def _eval_Unary(self, state, e):
        op = e.op
        if op in ("++", "--"):
            return self._eval_incdec(state, e)
        if op == "*":
            out = []
            for s, sv, ct in self.eval(state, e.operand):
                if not ct.is_pointer:
                    raise EngineFailure(EngineFailure.UNSUPPORTED, "dereference of non-pointer")
                pointee = ct.pointee()
                addr = self._concretize(s, sv)
                out.append((s, self._load(s, addr, pointee.value_width), pointee))
            return out
        if op == "&":
            out = []
            for s, loc in self._lvalue(state, e.operand):
                kind = loc[0]
                if kind != "mem":
                    raise EngineFailure(EngineFailure.UNSUPPORTED, "address of register local")
                _, addr, ctype = loc
                out.append((s, V.const(addr, 64), ctype.pointer_to()))
            return out
        out = []
        for s, sv, ct in self.eval(state, e.operand):
            if op == "-":
                w = max(32, sv.width)
                out.append((s, V.neg(V.resize(sv, w, _is_signed_value(ct))), _promote(ct)))
            elif op == "+":
                out.append((s, sv, ct))
            elif op == "~":
                w = max(32, sv.width)
                out.append((s, V.bnot(V.resize(sv, w, _is_signed_value(ct))), _promote(ct)))
            elif op == "!":
                truth = V.lnot(V.bool_value(sv))
                out.append((s, V.zext(truth, 32), A.I32))
            else:
                raise EngineFailure(EngineFailure.UNSUPPORTED, f"unary {op}")
        return out

    def _eval_incdec(self, state, e):
        out = []
        for s, loc in self._lvalue(state, e.operand):
            old, ctype = self._read_loc(s, loc)
            step = V.const(ctype.pointee().sizeof() if ctype.is_pointer else 1, old.width)
            new = V.add(old, step) if e.op == "++" else V.sub(old, step)
            self._write_loc(s, loc, new)
            out.append((s, new if e.prefix else old, ctype))
        return out

    def _eval_Binary(self, state, e):
        op = e.op
        if op in ("&&", "||"):
            return self._eval_logical(state, e)
        out = []
        for s, lv, lt in self.eval(state, e.left):
            for s2, rv, rt in self.eval(s, e.right):
                out.append((s2, *self._apply_binary(op, lv, lt, rv, rt)))
        return out

    def _apply_binary(self, op, lv, lt, rv, rt):
        if op in ("<<", ">>"):
            w = max(32, lv.width)
            a = V.resize(lv, w, _is_signed_value(lt))
            b = V.resize(rv, w, _is_signed_value(rt))
            if op == "<<":
                return V.shl(a, b), _promote(lt)
            if _is_signed_value(lt):
                return V.ashr(a, b), _promote(lt)
            return V.lshr(a, b), _promote(lt)
        if lt.is_pointer or rt.is_pointer:
            return self._pointer_arith(op, lv, lt, rv, rt)
        ct = _common_type(lt, rt)
        w = ct.value_width
        a = V.resize(lv, w, _is_signed_value(lt))
        b = V.resize(rv, w, _is_signed_value(rt))
        signed = ct.is_signed
        if op in ("==", "!=", "<", "<=", ">", ">="):
            cond = _compare(op, a, b, signed)
            return V.zext(cond, 32), A.I32
        fn = {
            "+": V.add, "-": V.sub, "*": V.mul,
            "/": V.sdiv if signed else V.udiv,
            "%": V.srem if signed else V.urem,
            "&": V.band, "|": V.bor, "^": V.bxor,
        }.get(op)
        if fn is None:
            raise EngineFailure(EngineFailure.UNSUPPORTED, f"operator {op}")
        return fn(a, b), ct

    def _pointer_arith(self, op, lv, lt, rv, rt):
        if op in ("==", "!=", "<", "<=", ">", ">="):
            a = V.resize(lv, 64, _is_signed_value(lt))
            b = V.resize(rv, 64, _is_signed_value(rt))
            return V.zext(_compare(op, a, b, False), 32), A.I32
        if op == "+" and lt.is_pointer and not rt.is_pointer:
            scale = V.const(lt.pointee().sizeof(), 64)
            off = V.mul(V.resize(rv, 64, _is_signed_value(rt)), scale)
            return V.add(V.resize(lv, 64, False), off), lt
        if op == "+" and rt.is_pointer:
            return self._pointer_arith(op, rv, rt, lv, lt)
        if op == "-" and lt.is_pointer and not rt.is_pointer:
            scale = V.const(lt.pointee().sizeof(), 64)
            off = V.mul(V.resize(rv, 64, _is_signed_value(rt)), scale)
            return V.sub(V.resize(lv, 64, False), off), lt
        raise EngineFailure(EngineFailure.UNSUPPORTED, f"pointer operator {op}")

    def _eval_logical(self, state, e):
        is_and = e.op == "&&"
        out = []
        for s, lv, _ in self.eval(state, e.left):
            cond = V.substitute(V.bool_value(lv), s.bindings)
            if cond.is_const:
                if bool(cond.value) == is_and:
                    for s2, rv, _ in self.eval(s, e.right):
                        truth = V.bool_value(rv)
                        out.append((s2, V.zext(truth, 32) if truth.width == 1 else truth, A.I32))
                else:
                    out.append((s, V.const(0 if is_and else 1, 32), A.I32))
                continue
            st, sf = self._fork(s, cond)
            taken, skipped = (st, sf) if is_and else (sf, st)
            for s2, rv, _ in self.eval(taken, e.right):
                out.append((s2, V.zext(V.bool_value(rv), 32), A.I32))
            out.append((skipped, V.const(0 if is_and else 1, 32), A.I32))
        return out

    def _eval_Subscript(self, state, e):
        out = []
        for s, loc in self._subscript_loc(state, e):
            sv, ct = self._read_loc(s, loc)
            out.append((s, sv, ct))
        return out

    def _eval_Assign(self, state, e):
        out = []
        for s, loc in self._lvalue(state, e.target):
            for s2, rv, rt in self.eval(s, e.value):
                target_t = loc[2]
                if e.op == "=":
                    value = V.resize(rv, target_t.value_width, _is_signed_value(rt))
                else:
                    old, _ = self._read_loc(s2, loc)
                    old_t = target_t
                    value, _ = self._apply_binary(e.op[:-1], old, old_t, rv, rt)
                    value = V.resize(value, target_t.value_width, _is_signed_value(old_t))
                self._write_loc(s2, loc, value)
                out.append((s2, value, target_t))
        return out

    # --- lvalues: ("var", name, ctype) or ("mem", addr, ctype) ---

    def _lvalue(self, state, e):
        if isinstance(e, A.Ident):
            slot = state.env.get(e.name)
            if slot is None:
                raise EngineFailure(EngineFailure.UNSUPPORTED, f"assignment to external {e.name!r}")
            if slot[0] == "val":
                return [(state, ("var", e.name, slot[2]))]
            _, addr, ctype, array_len = slot
            if array_len:
                raise EngineFailure(EngineFailure.UNSUPPORTED, "assignment to array")
            return [(state, ("mem", addr, ctype))]
        if isinstance(e, A.Unary) and e.op == "*":
            out = []
            for s, sv, ct in self.eval(state, e.operand):
                if not ct.is_pointer:
                    raise EngineFailure(EngineFailure.UNSUPPORTED, "store through non-pointer")
                addr = self._concretize(s, sv)
                out.append((s, ("mem", addr, ct.pointee())))
            return out
        if isinstance(e, A.Subscript):
            return self._subscript_loc(state, e)
        if isinstance(e, A.Cast):
            # (type) lvalue casts occasionally appear; honor the cast width
            out = []
            for s, loc in self._lvalue(state, e.expr):
                if loc[0] == "mem":
                    out.append((s, ("mem", loc[1], e.ctype)))
                else:
                    out.append((s, loc))
            return out
        raise EngineFailure(EngineFailure.UNSUPPORTED, f"lvalue {e.kind}")

    def _subscript_loc(self, state, e):
        out = []
        for s, base, bt in self.eval(state, e.base):
            if not bt.is_pointer:
                raise EngineFailure(EngineFailure.UNSUPPORTED, "subscript of non-pointer")
            for s2, idx, it in self.eval(s, e.index):
                scale = V.const(bt.pointee().sizeof(), 64)
                addr_sv = V.add(V.resize(base, 64, False),
                                V.mul(V.resize(idx, 64, _is_signed_value(it)), scale))
                addr = self._concretize(s2, addr_sv)
                out.append((s2, ("mem", addr, bt.pointee())))
        return out

    def _read_loc(self, state, loc):
        if loc[0] == "var":
            slot = state.env[loc[1]]
            return slot[1], slot[2]
        _, addr, ctype = loc
        return self._load(state, addr, ctype.value_width), ctype

    def _write_loc(self, state, loc, value):
        if loc[0] == "var":
            state.env[loc[1]] = ("val", value, loc[2])
        else:
            self._store(state, loc[1], value)

    # --- statements ---

    def _fork(self, state, cond):
        self.forks += 1
        self._check_paths(self.forks)
        st = state.fork()
        sf = state
        st.trace.append((cond, True))
        sf.trace.append((cond, False))
        return st, sf

    def exec_stmt(self, state, stmt):
        self._tick()
        if isinstance(stmt, A.Block):
            return self.exec_block(state, stmt.stmts)
        if isinstance(stmt, A.Decl):
            return self._exec_decl(state, stmt)
        if isinstance(stmt, A.ExprStmt):
            return [(s, NEXT, None) for s, _, _ in self.eval(state, stmt.expr)]
        if isinstance(stmt, A.If):
            out = []
            for s, cv, _ in self.eval(state, stmt.cond):
                cond = V.substitute(V.bool_value(cv), s.bindings)
                if cond.is_const:
                    branch = stmt.then if cond.value else stmt.other
                    out.extend(self.exec_stmt(s, branch) if branch else [(s, NEXT, None)])
                    continue
                st, sf = self._fork(s, cond)
                out.extend(self.exec_stmt(st, stmt.then))
                out.extend(self.exec_stmt(sf, stmt.other) if stmt.other else [(sf, NEXT, None)])
            return out
        if isinstance(stmt, A.While):
            return self._exec_loop(state, cond=stmt.cond, body=stmt.body, post=False)
        if isinstance(stmt, A.DoWhile):
            return self._exec_loop(state, cond=stmt.cond, body=stmt.body, post=True)
        if isinstance(stmt, A.For):
            return self._exec_for(state, stmt)
        if isinstance(stmt, A.Return):
            if stmt.value is None or self.ret_width == 0:
                return [(s, RETURN, None) for s in
                        ([state] if stmt.value is None
                         else [s for s, _, _ in self.eval(state, stmt.value)])]
            out = []
            for s, sv, ct in self.eval(state, stmt.value):
                out.append((s, RETURN, V.resize(sv, self.ret_width, _is_signed_value(ct))))
            return out
        if isinstance(stmt, A.Goto):
            return [(state, GOTO, stmt.label)]
        if isinstance(stmt, A.Label):
            if stmt.stmt is None:
                return [(state, NEXT, None)]
            return self.exec_stmt(state, stmt.stmt)
        if isinstance(stmt, A.Break):
            return [(state, BREAK, None)]
        if isinstance(stmt, A.Continue):
            return [(state, CONTINUE, None)]
        if isinstance(stmt, A.Switch):
            return self._exec_switch(state, stmt)
        raise EngineFailure(EngineFailure.UNSUPPORTED, f"statement {stmt.kind}")

    def _exec_decl(self, state, stmt):
        results = [(state, NEXT, None)]
        for d in stmt.declarators:
            nxt = []
            for s, fl, pl in results:
                if fl != NEXT:
                    nxt.append((s, fl, pl))
                    continue
                if d.array_len:
                    addr = self._alloc(s, f"local:{self.fn.name}:{d.name}")
                    s.env[d.name] = ("mem", addr, d.ctype, d.array_len)
                    nxt.append((s, NEXT, None))
                    continue
                if d.init is not None:
                    for s2, sv, ct in self.eval(s, d.init):
                        s2.env[d.name] = ("val",
                                          V.resize(sv, d.ctype.value_width, _is_signed_value(ct)),
                                          d.ctype)
                        nxt.append((s2, NEXT, None))
                else:
                    # uninitialized local: deterministic per-name symbol
                    s.env[d.name] = ("val", V.sym(f"uninit_{self.fn.name}_{d.name}",
                                                  d.ctype.value_width), d.ctype)
                    nxt.append((s, NEXT, None))
            results = nxt
        return results

    def exec_block(self, state, stmts):
        results = [(state, NEXT, None)]
        i = 0
        # worklist of (state, index); flows other than NEXT bubble upward,
        # except gotos whose label lives at this block's level
        final = []
        work = [(state, 0)]
        label_index = {s.name: j for j, s in enumerate(stmts) if isinstance(s, A.Label)}
        while work:
            st, i = work.pop()
            if i >= len(stmts):
                final.append((st, NEXT, None))
                continue
            for s2, flow, payload in self.exec_stmt(st, stmts[i]):
                if flow == NEXT:
                    work.append((s2, i + 1))
                elif flow == GOTO and payload in label_index:
                    work.append((s2, label_index[payload]))
                else:
                    final.append((s2, flow, payload))
        return final

    def _exec_loop(self, state, cond, body, post):
        final = []
        work = [(state, 0, post)]   # (state, iterations, skip_cond_once)
        while work:
            st, iters, run_body_first = work.pop()
            if run_body_first:
                for s2, flow, payload in self.exec_stmt(st, body):
                    if flow in (NEXT, CONTINUE):
                        work.append((s2, iters + 1, False))
                    elif flow == BREAK:
                        final.append((s2, NEXT, None))
                    else:
                        final.append((s2, flow, payload))
                continue
            entered = False
            for s, cv, _ in self.eval(st, cond):
                c = V.substitute(V.bool_value(cv), s.bindings)
                if c.is_const:
                    if c.value:
                        if iters >= self.cfg.unroll_bound:
                            self._mark_incomplete(s, final)
                        else:
                            work.append((s, iters, True))
                    else:
                        final.append((s, NEXT, None))
                    continue
                if iters >= self.cfg.unroll_bound:
                    # bounded-exit assumption: treat the loop as finished
                    s.assumptions.append(V.lnot(c))
                    self.bounded = True
                    final.append((s, NEXT, None))
                    continue
                s_in, s_out = self._fork(s, c)
                work.append((s_in, iters, True))
                final.append((s_out, NEXT, None))
        return final

    def _mark_incomplete(self, state, final):
        self.explored_complete = False
        final.append((state, RETURN,
                      V.sym("incomplete", self.ret_width) if self.ret_width else None))

    def _exec_for(self, state, stmt):
        starts = [state]
        if stmt.init is not None:
            if isinstance(stmt.init, A.Decl):
                starts = [s for s, _, _ in self._exec_decl(state, stmt.init)]
            else:
                starts = [s for s, _, _ in self.eval(state, stmt.init)]
        final = []
        # (state, iterations, phase) phase: 0=check cond, 1=run body, 2=run step
        work = [(s, 0, 0) for s in starts]
        while work:
            st, iters, phase = work.pop()
            if phase == 2:
                if stmt.step is not None:
                    for s2, _, _ in self.eval(st, stmt.step):
                        work.append((s2, iters + 1, 0))
                else:
                    work.append((st, iters + 1, 0))
                continue
            if phase == 1:
                for s2, flow, payload in self.exec_stmt(st, stmt.body):
                    if flow in (NEXT, CONTINUE):
                        work.append((s2, iters, 2))
                    elif flow == BREAK:
                        final.append((s2, NEXT, None))
                    else:
                        final.append((s2, flow, payload))
                continue
            if stmt.cond is None:
                if iters >= self.cfg.unroll_bound:
                    self._mark_incomplete(st, final)
                else:
                    work.append((st, iters, 1))
                continue
            for s, cv, _ in self.eval(st, stmt.cond):
                c = V.substitute(V.bool_value(cv), s.bindings)
                if c.is_const:
                    if c.value:
                        if iters >= self.cfg.unroll_bound:
                            self._mark_incomplete(s, final)
                        else:
                            work.append((s, iters, 1))
                    else:
                        final.append((s, NEXT, None))
                    continue
                if iters >= self.cfg.unroll_bound:
                    s.assumptions.append(V.lnot(c))
                    self.bounded = True
                    final.append((s, NEXT, None))
                    continue
                s_in, s_out = self._fork(s, c)
                work.append((s_in, iters, 1))
                final.append((s_out, NEXT, None))
        return final

    def _exec_switch(self, state, stmt):
        final = []
        cases = stmt.cases
        default_idx = next((i for i, (lit, _) in enumerate(cases) if lit is None), None)

        def run_from(s, idx):
            work = [(s, idx, 0)]
            while work:
                st, ci, si = work.pop()
                if ci >= len(cases):
                    final.append((st, NEXT, None))
                    continue
                stmts = cases[ci][1]
                if si >= len(stmts):
                    work.append((st, ci + 1, 0))
                    continue
                for s2, flow, payload in self.exec_stmt(st, stmts[si]):
                    if flow == NEXT:
                        work.append((s2, ci, si + 1))
                    elif flow == BREAK:
                        final.append((s2, NEXT, None))
                    else:
                        final.append((s2, flow, payload))

        for s, sv, ct in self.eval(state, stmt.value):
            remaining = s
            matched_concretely = False
            for i, (lit, _) in enumerate(cases):
                if lit is None:
                    continue
                cv = V.const(lit.value, sv.width)
                c = V.substitute(V.eq(V.substitute(sv, remaining.bindings), cv),
                                 remaining.bindings)
                if c.is_const:
                    if c.value:
                        run_from(remaining, i)
                        matched_concretely = True
                        break
                    continue
                st, remaining = self._fork(remaining, c)
                run_from(st, i)
            if not matched_concretely:
                if default_idx is not None:
                    run_from(remaining, default_idx)
                else:
                    final.append((remaining, NEXT, None))
        return final

    # --- top level ---

    def run(self) -> SymbolicModel:
        state = _State()
        param_widths = []
        for i, p in enumerate(self.fn.params):
            width = p.ctype.value_width
            param_widths.append(width)
            state.env[p.name] = ("val", V.sym(f"arg{i}", width), p.ctype)
        results = self.exec_block(state, self.fn.body.stmts)
        leaves = []
        for s, flow, payload in results:
            if flow == GOTO:
                raise EngineFailure(EngineFailure.UNSUPPORTED, f"goto {payload!r} out of scope")
            if flow in (BREAK, CONTINUE):
                raise EngineFailure(EngineFailure.UNSUPPORTED, f"{flow} outside loop")
            ret = payload
            if flow == NEXT:
                ret = V.const(0, self.ret_width) if self.ret_width else None
            elif ret is None and self.ret_width:
                ret = V.const(0, self.ret_width)
            leaves.append((s, ret))
        self._check_paths(len(leaves))
        if not leaves:
            raise EngineFailure(EngineFailure.UNSUPPORTED, "no feasible path")
        ret_tree = _merge(leaves, 0, lambda leaf: leaf[1]) if self.ret_width else None
        names = sorted(self.ground_truth)
        count_trees = {}
        for name in names + ["other"]:
            count_trees[name] = _merge(
                leaves, 0,
                lambda leaf, n=name: V.const(min(leaf[0].counts.get(n, 0), V.mask(COUNT_WIDTH)),
                                             COUNT_WIDTH))
        paths = []
        assumptions = []
        seen_assumptions = set()
        for s, ret in leaves:
            pc = V.TRUE
            for cond, taken in s.trace:
                pc = V.land(pc, cond if taken else V.lnot(cond))
            for a in s.assumptions:
                pc = V.land(pc, a)
                if a not in seen_assumptions:
                    seen_assumptions.add(a)
                    assumptions.append(a)
            paths.append((pc, ret, dict(s.counts)))
        return SymbolicModel(
            function_name=self.fn.name,
            param_widths=param_widths,
            return_width=self.ret_width,
            ret_tree=ret_tree,
            count_trees=count_trees,
            paths=paths,
            assumptions=assumptions,
            explored_complete=self.explored_complete,
            bounded=self.bounded,
        )


def _promote(t: A.CType) -> A.CType:
    if t.value_width < 32:
        return A.I32
    return t


def _compare(op, a, b, signed):
    if op == "==":
        return V.eq(a, b)
    if op == "!=":
        return V.ne(a, b)
    lt_fn, le_fn = (V.slt, V.sle) if signed else (V.ult, V.ule)
    if op == "<":
        return lt_fn(a, b)
    if op == "<=":
        return le_fn(a, b)
    if op == ">":
        return lt_fn(b, a)
    return le_fn(b, a)


def _split_base(sv):
    """Decompose addr into (symbolic term, concrete offset)."""
    offset = 0
    node = sv
    while node.op in ("add", "sub"):
        a, b = node.args
        if b.is_const:
            offset += b.value if node.op == "add" else -b.value
            node = a
        elif a.is_const and node.op == "add":
            offset += a.value
            node = b
        else:
            break
    return node, offset


def _merge(leaves, depth, value_of):
    """Rebuild the DFS fork tree from leaf traces as nested if-then-else."""
    if len(leaves) == 1:
        return value_of(leaves[0])
    trace = leaves[0][0].trace
    cond = trace[depth][0]
    true_group = [lf for lf in leaves if lf[0].trace[depth][1]]
    false_group = [lf for lf in leaves if not lf[0].trace[depth][1]]
    assert true_group and false_group, "fork tree out of shape"
    return V.ite(cond, _merge(true_group, depth + 1, value_of),
                 _merge(false_group, depth + 1, value_of))


def build_models(fn, ground_truth_calls, cfg: EngineConfig | None = None,
                 registry: AllocationRegistry | None = None) -> SymbolicModel:
    """Symbolically execute ``fn`` and produce its return/call-count model."""
    if cfg is None:
        cfg = EngineConfig()
    return Engine(fn, ground_truth_calls, cfg, registry).run()
