"""SMT-LIB2 QF_BV solver via bit-blasting.

Reads a script from stdin (or a file argument), prints ``sat``/``unsat``
and, on (get-model), values for every declared constant.

Values are bitvectors (little-endian literal lists) or booleans (one
literal); ``=`` and the bv predicates produce booleans, ``ite`` on a
boolean condition selects between vectors.
"""

import sys

from .blast import Blaster
from .sexpr import SexprError, parse_all


class SolveError(ValueError):
    pass


class BV:
    __slots__ = ("bits",)

    def __init__(self, bits):
        self.bits = bits


class Bool:
    __slots__ = ("lit",)

    def __init__(self, lit):
        self.lit = lit


class Interp:
    def __init__(self):
        self.b = Blaster()
        self.env = {}              # name -> BV | Bool
        self.decls = []            # (name, width) in declaration order
        self.checked = None

    # --- terms ---

    def term(self, e):
        if isinstance(e, str):
            return self.atom(e)
        if not e:
            raise SolveError("empty application")
        head = e[0]
        if head == "let":
            saved = dict(self.env)
            for name, body in e[1]:
                self.env[name] = self.term(body)
            out = self.term(e[2])
            self.env = saved
            return out
        if isinstance(head, list):
            return self.indexed(head, e[1:])
        args = [self.term(a) for a in e[1:]]
        return self.apply(head, args)

    def atom(self, tok):
        if tok in self.env:
            return self.env[tok]
        if tok == "true":
            return Bool(self.b.T)
        if tok == "false":
            return Bool(self.b.F)
        if tok.startswith("#x"):
            width = (len(tok) - 2) * 4
            return BV(self.b.const_vec(int(tok[2:], 16), width))
        if tok.startswith("#b"):
            return BV(self.b.const_vec(int(tok[2:], 2), len(tok) - 2))
        raise SolveError(f"unknown symbol {tok!r}")

    def indexed(self, head, rest):
        if head[0] != "_":
            raise SolveError(f"bad application head {head!r}")
        name = head[1]
        if name.startswith("bv"):
            return BV(self.b.const_vec(int(name[2:]), int(head[2])))
        args = [self.term(a) for a in rest]
        if name == "extract":
            hi, lo = int(head[2]), int(head[3])
            return BV(args[0].bits[lo:hi + 1])
        if name == "zero_extend":
            n = int(head[2])
            return BV(args[0].bits + [self.b.F] * n)
        if name == "sign_extend":
            n = int(head[2])
            return BV(args[0].bits + [args[0].bits[-1]] * n)
        if name == "rotate_left":
            n = int(head[2]) % len(args[0].bits)
            bits = args[0].bits
            return BV(bits[-n:] + bits[:-n] if n else bits)
        if name == "rotate_right":
            n = int(head[2]) % len(args[0].bits)
            bits = args[0].bits
            return BV(bits[n:] + bits[:n] if n else bits)
        raise SolveError(f"unsupported indexed op {name!r}")

    def apply(self, op, args):
        b = self.b
        if op == "ite":
            cond = args[0]
            if not isinstance(cond, Bool):
                raise SolveError("ite condition must be boolean")
            x, y = args[1], args[2]
            if isinstance(x, Bool):
                return Bool(b.mux(cond.lit, x.lit, y.lit))
            return BV(b.mux_vec(cond.lit, x.bits, y.bits))
        if op == "=":
            x, y = args
            if isinstance(x, Bool):
                return Bool(b.iff_gate(x.lit, y.lit))
            return Bool(b.eq_vec(x.bits, y.bits))
        if op == "distinct":
            x, y = args
            if isinstance(x, Bool):
                return Bool(b.xor_gate(x.lit, y.lit))
            return Bool(-b.eq_vec(x.bits, y.bits))
        if op == "not":
            return Bool(-args[0].lit)
        if op == "and":
            out = b.T
            for a in args:
                out = b.and_gate(out, a.lit)
            return Bool(out)
        if op == "or":
            out = b.F
            for a in args:
                out = b.or_gate(out, a.lit)
            return Bool(out)
        if op == "xor":
            out = b.F
            for a in args:
                out = b.xor_gate(out, a.lit)
            return Bool(out)
        if op == "=>":
            return Bool(b.or_gate(-args[0].lit, args[1].lit))
        preds = {"bvult": b.ult_vec, "bvule": b.ule_vec,
                 "bvslt": b.slt_vec, "bvsle": b.sle_vec}
        if op in preds:
            return Bool(preds[op](args[0].bits, args[1].bits))
        if op == "bvugt":
            return Bool(b.ult_vec(args[1].bits, args[0].bits))
        if op == "bvuge":
            return Bool(b.ule_vec(args[1].bits, args[0].bits))
        if op == "bvsgt":
            return Bool(b.slt_vec(args[1].bits, args[0].bits))
        if op == "bvsge":
            return Bool(b.sle_vec(args[1].bits, args[0].bits))
        if op == "bvnot":
            return BV(b.not_vec(args[0].bits))
        if op == "bvneg":
            return BV(b.neg_vec(args[0].bits))
        if op == "concat":
            out = args[-1].bits
            for a in reversed(args[:-1]):
                out = out + a.bits
            return BV(out)
        binops = {
            "bvadd": b.add_vec, "bvsub": b.sub_vec, "bvmul": b.mul_vec,
            "bvand": b.and_vec, "bvor": b.or_vec, "bvxor": b.xor_vec,
            "bvshl": b.shl_vec, "bvlshr": b.lshr_vec, "bvashr": b.ashr_vec,
        }
        if op in binops:
            out = args[0].bits
            for a in args[1:]:
                out = binops[op](out, a.bits)
            return BV(out)
        if op == "bvudiv":
            return BV(b.udivrem_vec(args[0].bits, args[1].bits)[0])
        if op == "bvurem":
            return BV(b.udivrem_vec(args[0].bits, args[1].bits)[1])
        if op == "bvsdiv":
            return BV(b.sdivrem_vec(args[0].bits, args[1].bits)[0])
        if op == "bvsrem":
            return BV(b.sdivrem_vec(args[0].bits, args[1].bits)[1])
        if op == "bvnand":
            return BV(b.not_vec(b.and_vec(args[0].bits, args[1].bits)))
        if op == "bvnor":
            return BV(b.not_vec(b.or_vec(args[0].bits, args[1].bits)))
        raise SolveError(f"unsupported operator {op!r}")

    # --- commands ---

    @staticmethod
    def _sort_width(sort):
        if isinstance(sort, list) and len(sort) == 3 and sort[0] == "_" and sort[1] == "BitVec":
            return int(sort[2])
        if sort == "Bool":
            return 0
        raise SolveError(f"unsupported sort {sort!r}")

    def command(self, form, out):
        head = form[0]
        if head in ("set-logic", "set-option", "set-info", "push", "pop"):
            return True
        if head == "declare-const" or (head == "declare-fun" and form[2] == []):
            name = form[1]
            sort = form[-1]
            width = self._sort_width(sort)
            if width == 0:
                self.env[name] = Bool(self.b.fresh())
                self.decls.append((name, 0))
            else:
                self.env[name] = BV(self.b.fresh_vec(width))
                self.decls.append((name, width))
            return True
        if head == "define-fun":
            name, params, _sort, body = form[1], form[2], form[3], form[4]
            if params:
                raise SolveError("define-fun with parameters is unsupported")
            self.env[name] = self.term(body)
            return True
        if head == "assert":
            val = self.term(form[1])
            if not isinstance(val, Bool):
                raise SolveError("assert needs a boolean")
            self.b.sat.add_clause([val.lit])
            return True
        if head == "check-sat":
            self.checked = self.b.sat.solve()
            out.write("sat\n" if self.checked else "unsat\n")
            return True
        if head == "get-model":
            if not self.checked:
                out.write("(error \"model is not available\")\n")
                return True
            lines = ["("]
            for name, width in self.decls:
                val = self.env[name]
                if width == 0:
                    text = "true" if self.b.sat.value(val.lit) == 1 else "false"
                    lines.append(f"  (define-fun {name} () Bool {text})")
                else:
                    v = self.b.vec_value(val.bits)
                    if width % 4 == 0:
                        lit = "#x%0*x" % (width // 4, v)
                    else:
                        lit = "#b" + format(v, f"0{width}b")
                    lines.append(f"  (define-fun {name} () (_ BitVec {width}) {lit})")
            lines.append(")")
            out.write("\n".join(lines) + "\n")
            return True
        if head == "exit":
            return False
        if head == "get-info":
            out.write("(:name \"dscore-smt\")\n")
            return True
        raise SolveError(f"unsupported command {head!r}")


def run(text, out) -> int:
    interp = Interp()
    try:
        for form in parse_all(text):
            if not isinstance(form, list):
                raise SolveError(f"stray token {form!r}")
            if not interp.command(form, out):
                break
    except (SolveError, SexprError) as ex:
        out.write(f'(error "{ex}")\n')
        return 1
    return 0


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    if argv and argv[0] in ("-h", "--help"):
        print("usage: dscore-smt [script.smt2]  (reads stdin when no file is given)")
        return 0
    if argv:
        with open(argv[0]) as fh:
            text = fh.read()
    else:
        text = sys.stdin.read()
    code = run(text, sys.stdout)
    sys.stdout.flush()
    return code


if __name__ == "__main__":
    sys.exit(main())
