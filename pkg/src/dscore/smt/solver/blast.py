"""Tseitin bit-blasting of bitvector operations onto the SAT core.

Vectors are little-endian lists of literals (index 0 = LSB). Constant
bits are the fixed literals T/F, so constant folding falls out of the
gate constructors.
"""

from .sat import SatSolver


class Blaster:
    def __init__(self):
        self.sat = SatSolver()
        t = self.sat.new_var()
        self.sat.add_clause([t])
        self.T = t
        self.F = -t
        self._and_cache = {}
        self._xor_cache = {}

    # --- single-bit gates ---

    def fresh(self):
        return self.sat.new_var()

    def and_gate(self, a, b):
        if a == self.F or b == self.F or a == -b:
            return self.F
        if a == self.T:
            return b
        if b == self.T or a == b:
            return a
        key = (a, b) if a < b else (b, a)
        out = self._and_cache.get(key)
        if out is None:
            out = self.fresh()
            self.sat.add_clause([-a, -b, out])
            self.sat.add_clause([a, -out])
            self.sat.add_clause([b, -out])
            self._and_cache[key] = out
        return out

    def or_gate(self, a, b):
        return -self.and_gate(-a, -b)

    def xor_gate(self, a, b):
        if a == self.F:
            return b
        if b == self.F:
            return a
        if a == self.T:
            return -b
        if b == self.T:
            return -a
        if a == b:
            return self.F
        if a == -b:
            return self.T
        key = (a, b) if abs(a) < abs(b) or (abs(a) == abs(b) and a < b) else (b, a)
        out = self._xor_cache.get(key)
        if out is None:
            out = self.fresh()
            self.sat.add_clause([-a, -b, -out])
            self.sat.add_clause([a, b, -out])
            self.sat.add_clause([a, -b, out])
            self.sat.add_clause([-a, b, out])
            self._xor_cache[key] = out
        return out

    def mux(self, sel, a, b):
        """sel ? a : b"""
        if sel == self.T:
            return a
        if sel == self.F:
            return b
        if a == b:
            return a
        return self.or_gate(self.and_gate(sel, a), self.and_gate(-sel, b))

    def iff_gate(self, a, b):
        return -self.xor_gate(a, b)

    # --- vectors ---

    def const_vec(self, value, width):
        return [self.T if (value >> i) & 1 else self.F for i in range(width)]

    def fresh_vec(self, width):
        return [self.fresh() for _ in range(width)]

    def vec_value(self, bits):
        """Read a vector under the current (sat) assignment."""
        out = 0
        for i, lit in enumerate(bits):
            if self.sat.value(lit) == 1:
                out |= 1 << i
        return out

    def add_vec(self, a, b, carry_in=None):
        carry = carry_in if carry_in is not None else self.F
        out = []
        for x, y in zip(a, b):
            s = self.xor_gate(self.xor_gate(x, y), carry)
            carry = self.or_gate(self.and_gate(x, y),
                                 self.and_gate(carry, self.xor_gate(x, y)))
            out.append(s)
        return out

    def sub_vec(self, a, b):
        return self.add_vec(a, [-x for x in b], carry_in=self.T)

    def neg_vec(self, a):
        return self.sub_vec(self.const_vec(0, len(a)), a)

    def not_vec(self, a):
        return [-x for x in a]

    def and_vec(self, a, b):
        return [self.and_gate(x, y) for x, y in zip(a, b)]

    def or_vec(self, a, b):
        return [self.or_gate(x, y) for x, y in zip(a, b)]

    def xor_vec(self, a, b):
        return [self.xor_gate(x, y) for x, y in zip(a, b)]

    def mux_vec(self, sel, a, b):
        return [self.mux(sel, x, y) for x, y in zip(a, b)]

    def mul_vec(self, a, b):
        w = len(a)
        acc = self.const_vec(0, w)
        for i in range(w):
            if b[i] == self.F:
                continue
            addend = [self.F] * i + [self.and_gate(b[i], a[k]) for k in range(w - i)]
            acc = self.add_vec(acc, addend)
        return acc

    def eq_vec(self, a, b):
        out = self.T
        for x, y in zip(a, b):
            out = self.and_gate(out, self.iff_gate(x, y))
        return out

    def ult_vec(self, a, b):
        # borrow chain, MSB down
        out = self.F
        for x, y in zip(a, b):   # LSB to MSB; later bits dominate
            out = self.mux(self.iff_gate(x, y), out, self.and_gate(-x, y))
        return out

    def ule_vec(self, a, b):
        return -self.ult_vec(b, a)

    def slt_vec(self, a, b):
        a2 = a[:-1] + [-a[-1]]
        b2 = b[:-1] + [-b[-1]]
        return self.ult_vec(a2, b2)

    def sle_vec(self, a, b):
        return -self.slt_vec(b, a)

    # --- shifts (barrel; amounts >= width give 0 / sign fill) ---

    def _shift_amount_bits(self, b, width):
        stages = max(1, (width - 1).bit_length())
        big = self.F
        for i in range(stages, len(b)):
            big = self.or_gate(big, b[i])
        return stages, big

    def shl_vec(self, a, b):
        w = len(a)
        stages, big = self._shift_amount_bits(b, w)
        cur = list(a)
        for s in range(stages):
            shift = 1 << s
            shifted = [self.F] * min(shift, w) + cur[: max(0, w - shift)]
            cur = self.mux_vec(b[s], shifted, cur)
        return self.mux_vec(big, self.const_vec(0, w), cur)

    def lshr_vec(self, a, b):
        w = len(a)
        stages, big = self._shift_amount_bits(b, w)
        cur = list(a)
        for s in range(stages):
            shift = 1 << s
            shifted = cur[shift:] + [self.F] * min(shift, w)
            cur = self.mux_vec(b[s], shifted, cur)
        return self.mux_vec(big, self.const_vec(0, w), cur)

    def ashr_vec(self, a, b):
        w = len(a)
        sign = a[-1]
        stages, big = self._shift_amount_bits(b, w)
        cur = list(a)
        for s in range(stages):
            shift = 1 << s
            shifted = cur[shift:] + [sign] * min(shift, w)
            cur = self.mux_vec(b[s], shifted, cur)
        return self.mux_vec(big, [sign] * w, cur)

    # --- division (restoring; div-by-zero: quotient all ones, remainder a) ---

    def udivrem_vec(self, a, b):
        w = len(a)
        rem = self.const_vec(0, w)
        quot = [self.F] * w
        for i in range(w - 1, -1, -1):
            rem = [a[i]] + rem[:-1]
            ge = self.ule_vec(b, rem)
            rem = self.mux_vec(ge, self.sub_vec(rem, b), rem)
            quot[i] = ge
        zero = self.eq_vec(b, self.const_vec(0, w))
        quot = self.mux_vec(zero, self.const_vec((1 << w) - 1, w), quot)
        rem = self.mux_vec(zero, a, rem)
        return quot, rem

    def sdivrem_vec(self, a, b):
        w = len(a)
        sa, sb = a[-1], b[-1]
        ua = self.mux_vec(sa, self.neg_vec(a), a)
        ub = self.mux_vec(sb, self.neg_vec(b), b)
        quot, rem = self.udivrem_vec(ua, ub)
        qneg = self.xor_gate(sa, sb)
        quot = self.mux_vec(qneg, self.neg_vec(quot), quot)
        rem = self.mux_vec(sa, self.neg_vec(rem), rem)
        zero = self.eq_vec(b, self.const_vec(0, w))
        quot = self.mux_vec(zero, self.const_vec((1 << w) - 1, w), quot)
        rem = self.mux_vec(zero, a, rem)
        return quot, rem
