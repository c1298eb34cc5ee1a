"""Lower bitvector expression DAGs to SMT-LIB2 (QF_BV) scripts.

Shared subterms are emitted once as define-fun names, so the script size
tracks the DAG, not the tree.
"""

from ..engine import symval as V

_BINOP = {
    "add": "bvadd", "sub": "bvsub", "mul": "bvmul",
    "udiv": "bvudiv", "urem": "bvurem", "sdiv": "bvsdiv", "srem": "bvsrem",
    "and": "bvand", "or": "bvor", "xor": "bvxor",
    "shl": "bvshl", "lshr": "bvlshr", "ashr": "bvashr",
}

_CMP = {"eq": "=", "ult": "bvult", "ule": "bvule", "slt": "bvslt", "sle": "bvsle"}


def _bv_literal(value: int, width: int) -> str:
    if width % 4 == 0:
        return "#x%0*x" % (width // 4, value)
    return "#b" + format(value, f"0{width}b")


class ScriptBuilder:
    """Accumulates declarations, definitions, and assertions for one query."""

    def __init__(self):
        self.decls = {}            # symbol name -> width
        self.defs = []             # "(define-fun tN () (_ BitVec w) ...)"
        self.names = {}            # SymValue -> smt name or inline atom
        self.asserts = []

    def ref(self, node) -> str:
        found = self.names.get(node)
        if found is not None:
            return found
        # iterative post-order: Python recursion depth is too small for
        # deep ite chains
        stack = [(node, False)]
        while stack:
            n, ready = stack.pop()
            if n in self.names:
                continue
            if not ready:
                stack.append((n, True))
                for a in n.args:
                    if a not in self.names:
                        stack.append((a, False))
                continue
            self.names[n] = self._emit(n)
        return self.names[node]

    def _emit(self, n) -> str:
        if n.op == "const":
            return _bv_literal(n.value, n.width)
        if n.op == "sym":
            self.decls.setdefault(n.extra, n.width)
            return n.extra
        body = self._body(n)
        name = f"t{len(self.defs)}"
        self.defs.append(f"(define-fun {name} () (_ BitVec {n.width}) {body})")
        return name

    def _body(self, n) -> str:
        op = n.op
        refs = [self.names[a] for a in n.args]
        if op in _BINOP:
            return f"({_BINOP[op]} {refs[0]} {refs[1]})"
        if op in _CMP:
            return f"(ite ({_CMP[op]} {refs[0]} {refs[1]}) #b1 #b0)"
        if op == "not":
            return f"(bvnot {refs[0]})"
        if op == "neg":
            return f"(bvneg {refs[0]})"
        if op == "concat":
            return f"(concat {refs[0]} {refs[1]})"
        if op == "extract":
            hi, lo = n.extra
            return f"((_ extract {hi} {lo}) {refs[0]})"
        if op == "zext":
            return f"((_ zero_extend {n.width - n.args[0].width}) {refs[0]})"
        if op == "sext":
            return f"((_ sign_extend {n.width - n.args[0].width}) {refs[0]})"
        if op == "ite":
            return f"(ite (= {refs[0]} #b1) {refs[1]} {refs[2]})"
        raise ValueError(f"unencodable op {op!r}")

    def assert_true(self, node):
        """Assert a width-1 term holds."""
        assert node.width == 1
        self.asserts.append(f"(assert (= {self.ref(node)} #b1))")

    def script(self, get_model: bool = True) -> str:
        lines = ["(set-logic QF_BV)"]
        lines.extend(f"(declare-const {name} (_ BitVec {width}))"
                     for name, width in sorted(self.decls.items()))
        lines.extend(self.defs)
        lines.extend(self.asserts)
        lines.append("(check-sat)")
        if get_model:
            lines.append("(get-model)")
        lines.append("(exit)")
        return "\n".join(lines) + "\n"
