"""Hash-consed bitvector expression trees with constant folding.

Every node carries an explicit width. Booleans are width-1 bitvectors.
Structural sharing makes equal subterms identical objects, which the
equivalence encoder relies on for fast identity checks.
"""

_INTERN: dict = {}


class SymValue:
    __slots__ = ("op", "width", "args", "extra", "serial", "_hash")

    def __new__(cls, op, width, args=(), extra=None):
        key = (op, width, args, extra)
        found = _INTERN.get(key)
        if found is not None:
            return found
        self = object.__new__(cls)
        self.op = op
        self.width = width
        self.args = args
        self.extra = extra
        # creation-order serial: a deterministic total order for
        # argument normalisation (id() would vary across runs)
        self.serial = len(_INTERN)
        self._hash = hash(key)
        _INTERN[key] = self
        return self

    def __hash__(self):
        return self._hash

    def __repr__(self):
        if self.op == "const":
            return f"#{self.extra:#x}:{self.width}"
        if self.op == "sym":
            return f"{self.extra}:{self.width}"
        inner = ",".join(repr(a) for a in self.args)
        extra = f"[{self.extra}]" if self.extra is not None else ""
        return f"{self.op}{extra}({inner})"

    @property
    def is_const(self):
        return self.op == "const"

    @property
    def value(self):
        assert self.op == "const"
        return self.extra

    def signed_value(self):
        v = self.value
        if v >= 1 << (self.width - 1):
            v -= 1 << self.width
        return v


def mask(width):
    return (1 << width) - 1


def const(value, width):
    return SymValue("const", width, extra=value & mask(width))


def sym(name, width):
    return SymValue("sym", width, extra=name)


TRUE = const(1, 1)
FALSE = const(0, 1)


def _to_signed(v, w):
    return v - (1 << w) if v >= 1 << (w - 1) else v


_COMMUTATIVE = {"add", "mul", "and", "or", "xor"}


def _binop(op, a, b):
    assert a.width == b.width, (op, a, b)
    w = a.width
    if a.is_const and b.is_const:
        x, y = a.value, b.value
        if op == "add":
            return const(x + y, w)
        if op == "sub":
            return const(x - y, w)
        if op == "mul":
            return const(x * y, w)
        if op == "and":
            return const(x & y, w)
        if op == "or":
            return const(x | y, w)
        if op == "xor":
            return const(x ^ y, w)
        if op == "udiv":
            return const(mask(w) if y == 0 else x // y, w)
        if op == "urem":
            return const(x if y == 0 else x % y, w)
        if op == "sdiv":
            if y == 0:
                return const(mask(w), w)
            sx, sy = _to_signed(x, w), _to_signed(y, w)
            q = abs(sx) // abs(sy)
            if (sx < 0) != (sy < 0):
                q = -q
            return const(q, w)
        if op == "srem":
            if y == 0:
                return const(x, w)
            sx, sy = _to_signed(x, w), _to_signed(y, w)
            r = abs(sx) % abs(sy)
            return const(-r if sx < 0 else r, w)
        raise ValueError(op)
    zero = const(0, w)
    if op == "add":
        if a is zero:
            return b
        if b is zero:
            return a
    elif op == "sub":
        if b is zero:
            return a
        if a is b:
            return zero
    elif op == "mul":
        one = const(1, w)
        if a is one:
            return b
        if b is one:
            return a
        if a is zero or b is zero:
            return zero
    elif op == "and":
        ones = const(mask(w), w)
        if a is zero or b is zero:
            return zero
        if a is ones:
            return b
        if b is ones:
            return a
        if a is b:
            return a
    elif op == "or":
        ones = const(mask(w), w)
        if a is zero:
            return b
        if b is zero:
            return a
        if a is ones or b is ones:
            return ones
        if a is b:
            return a
    elif op == "xor":
        if a is zero:
            return b
        if b is zero:
            return a
        if a is b:
            return zero
    if op in _COMMUTATIVE and (b.is_const or (not a.is_const and b.serial < a.serial)):
        a, b = b, a
    return SymValue(op, w, (a, b))


def add(a, b):
    return _binop("add", a, b)


def sub(a, b):
    return _binop("sub", a, b)


def mul(a, b):
    return _binop("mul", a, b)


def udiv(a, b):
    return _binop("udiv", a, b)


def urem(a, b):
    return _binop("urem", a, b)


def sdiv(a, b):
    return _binop("sdiv", a, b)


def srem(a, b):
    return _binop("srem", a, b)


def band(a, b):
    return _binop("and", a, b)


def bor(a, b):
    return _binop("or", a, b)


def bxor(a, b):
    return _binop("xor", a, b)


def bnot(a):
    if a.is_const:
        return const(~a.value, a.width)
    if a.op == "not":
        return a.args[0]
    return SymValue("not", a.width, (a,))


def neg(a):
    if a.is_const:
        return const(-a.value, a.width)
    return SymValue("neg", a.width, (a,))


def _shift(op, a, b):
    w = a.width
    if b.is_const:
        s = b.value
        if s == 0:
            return a
        if a.is_const:
            x = a.value
            if op == "shl":
                return const(x << s if s < w else 0, w)
            if op == "lshr":
                return const(x >> s if s < w else 0, w)
            if op == "ashr":
                sx = _to_signed(x, w)
                return const(sx >> s if s < w else (-1 if sx < 0 else 0), w)
    return SymValue(op, w, (a, b))


def shl(a, b):
    return _shift("shl", a, b)


def lshr(a, b):
    return _shift("lshr", a, b)


def ashr(a, b):
    return _shift("ashr", a, b)


def concat(hi, lo):
    """hi occupies the most significant bits."""
    w = hi.width + lo.width
    if hi.is_const and lo.is_const:
        return const((hi.value << lo.width) | lo.value, w)
    # concat of adjacent extracts of one term folds back to the term
    if (hi.op == "extract" and lo.op == "extract"
            and hi.args[0] is lo.args[0]
            and hi.extra[1] == lo.extra[0] + 1):
        return extract(hi.args[0], hi.extra[0], lo.extra[1])
    if hi.is_const and hi.value == 0:
        return zext(lo, w)
    return SymValue("concat", w, (hi, lo))


def extract(a, hi_bit, lo_bit):
    w = hi_bit - lo_bit + 1
    if hi_bit == a.width - 1 and lo_bit == 0:
        return a
    if a.is_const:
        return const(a.value >> lo_bit, w)
    if a.op == "extract":
        return extract(a.args[0], a.extra[1] + hi_bit, a.extra[1] + lo_bit)
    if a.op == "concat":
        hi_part, lo_part = a.args
        if hi_bit < lo_part.width:
            return extract(lo_part, hi_bit, lo_bit)
        if lo_bit >= lo_part.width:
            return extract(hi_part, hi_bit - lo_part.width, lo_bit - lo_part.width)
    if a.op in ("zext", "sext") and hi_bit < a.args[0].width:
        return extract(a.args[0], hi_bit, lo_bit)
    if a.op == "zext" and lo_bit >= a.args[0].width:
        return const(0, w)
    return SymValue("extract", w, (a,), (hi_bit, lo_bit))


def zext(a, width):
    if width == a.width:
        return a
    assert width > a.width
    if a.is_const:
        return const(a.value, width)
    if a.op == "zext":
        return zext(a.args[0], width)
    return SymValue("zext", width, (a,))


def sext(a, width):
    if width == a.width:
        return a
    assert width > a.width
    if a.is_const:
        return const(_to_signed(a.value, a.width), width)
    if a.op == "sext":
        return sext(a.args[0], width)
    return SymValue("sext", width, (a,))


def truncate(a, width):
    if width == a.width:
        return a
    return extract(a, width - 1, 0)


def resize(a, width, signed):
    if width == a.width:
        return a
    if width < a.width:
        return truncate(a, width)
    return sext(a, width) if signed else zext(a, width)


def _cmp(op, a, b):
    assert a.width == b.width
    if a.is_const and b.is_const:
        x, y = a.value, b.value
        if op in ("slt", "sle"):
            x, y = _to_signed(x, a.width), _to_signed(y, a.width)
        if op == "eq":
            return TRUE if x == y else FALSE
        if op == "ult" or op == "slt":
            return TRUE if x < y else FALSE
        if op == "ule" or op == "sle":
            return TRUE if x <= y else FALSE
    if op == "eq" and a is b:
        return TRUE
    if op in ("ule", "sle") and a is b:
        return TRUE
    if op in ("ult", "slt") and a is b:
        return FALSE
    if op == "eq" and a.width == 1:
        if a.is_const:
            return b if a.value else lnot(b)
        if b.is_const:
            return a if b.value else lnot(a)
    if op == "eq":
        # eq(zext(x), c) narrows to a test on x itself
        for u, v in ((a, b), (b, a)):
            if u.op == "zext" and v.is_const:
                x = u.args[0]
                if v.value < (1 << x.width):
                    return _cmp("eq", x, const(v.value, x.width))
                return FALSE
        if b.is_const or (not a.is_const and b.serial < a.serial):
            a, b = b, a
    return SymValue(op, 1, (a, b))


def eq(a, b):
    return _cmp("eq", a, b)


def ne(a, b):
    return lnot(eq(a, b))


def ult(a, b):
    return _cmp("ult", a, b)


def ule(a, b):
    return _cmp("ule", a, b)


def slt(a, b):
    return _cmp("slt", a, b)


def sle(a, b):
    return _cmp("sle", a, b)


def lnot(a):
    assert a.width == 1
    if a.is_const:
        return FALSE if a.value else TRUE
    if a.op == "not":
        return a.args[0]
    return SymValue("not", 1, (a,))


def land(a, b):
    return band(a, b)


def lor(a, b):
    return bor(a, b)


def ite(cond, a, b):
    assert cond.width == 1 and a.width == b.width
    if cond.is_const:
        return a if cond.value else b
    if a is b:
        return a
    return SymValue("ite", a.width, (cond, a, b))


def is_true(a):
    return a.is_const and a.value == 1


def is_false(a):
    return a.is_const and a.value == 0


def bool_value(a):
    """width-1 truth value of an arbitrary-width term (!= 0)."""
    if a.width == 1:
        return a
    return ne(a, const(0, a.width))


def substitute(node, bindings, _memo=None):
    """Replace subterms per bindings {node: replacement}; returns a new term."""
    if _memo is None:
        _memo = {}
    found = _memo.get(node)
    if found is not None:
        return found
    hit = bindings.get(node)
    if hit is not None:
        _memo[node] = hit
        return hit
    if not node.args:
        _memo[node] = node
        return node
    new_args = tuple(substitute(a, bindings, _memo) for a in node.args)
    if new_args == node.args:
        out = node
    else:
        out = _rebuild(node.op, new_args, node.extra, node.width)
    _memo[node] = out
    return out


_REBUILD = {}

_REBUILD.update({
    "add": lambda a, e: add(*a), "sub": lambda a, e: sub(*a),
    "mul": lambda a, e: mul(*a), "and": lambda a, e: band(*a),
    "or": lambda a, e: bor(*a), "xor": lambda a, e: bxor(*a),
    "udiv": lambda a, e: udiv(*a), "urem": lambda a, e: urem(*a),
    "sdiv": lambda a, e: sdiv(*a), "srem": lambda a, e: srem(*a),
    "shl": lambda a, e: shl(*a), "lshr": lambda a, e: lshr(*a),
    "ashr": lambda a, e: ashr(*a), "concat": lambda a, e: concat(*a),
    "extract": lambda a, e: extract(a[0], e[0], e[1]),
    "zext": lambda a, e: None, "sext": lambda a, e: None,
    "eq": lambda a, e: eq(*a), "ult": lambda a, e: ult(*a),
    "ule": lambda a, e: ule(*a), "slt": lambda a, e: slt(*a),
    "sle": lambda a, e: sle(*a), "ite": lambda a, e: ite(*a),
    "neg": lambda a, e: neg(*a),
})


def _rebuild(op, args, extra, width):  # noqa: F811
    if op == "zext":
        return zext(args[0], width)
    if op == "sext":
        return sext(args[0], width)
    if op == "not":
        return lnot(args[0]) if width == 1 else bnot(args[0])
    fn = _REBUILD.get(op)
    if fn is not None:
        out = fn(args, extra)
        if out is not None:
            return out
    return SymValue(op, width, args, extra)


def free_symbols(node, out=None):
    if out is None:
        out = {}
    stack = [node]
    seen = set()
    while stack:
        n = stack.pop()
        if id(n) in seen:
            continue
        seen.add(id(n))
        if n.op == "sym":
            out[n.extra] = n
        stack.extend(n.args)
    return out
