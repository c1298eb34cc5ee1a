"""Small 8-bit function pairs with brute-force ground truth.

Each pair is (name, ref_src, cand_src). All parameters are unsigned char,
so the solver verdict can be checked against exhaustive enumeration of
the concrete interpreter over every input combination.
"""

from itertools import product

from dscore.engine.concrete import ConcreteConfig, concrete_eval
from dscore.frontend.parser import parse_function


def _fn(name, body, params=("a", "b")):
    plist = ", ".join(f"unsigned char {p}" for p in params)
    return f"unsigned char {name}({plist}) {{ {body} }}"


PAIRS = [
    # equivalent rewrites
    ("add-comm", _fn("f", "return a + b;"), _fn("f", "return b + a;")),
    ("double-shift", _fn("f", "return a + a;"), _fn("f", "return a << 1;")),
    ("xor-swap", _fn("f", """
        unsigned char t;
        t = a ^ b; b = t ^ b; a = t ^ a;
        return a + (b << 1);
     """), _fn("f", "return b + (a << 1);")),
    ("mask-mod", _fn("f", "return a % 16;", params=("a",)), _fn("f", "return a & 15;", params=("a",))),
    ("select-max", _fn("f", "if (a > b) { return a; } return b;"),
     _fn("f", "return a > b ? a : b;")),
    ("mul-shift-add", _fn("f", "return a * 10;", params=("a",)),
     _fn("f", "return (a << 3) + (a << 1);", params=("a",))),
    ("neg-sub", _fn("f", "return a - b;"), _fn("f", "return a + (0 - b);")),
    ("demorgan", _fn("f", "return ~(a & b);"), _fn("f", "return ~a | ~b;")),
    ("loop-sum-closed", _fn("f", """
        unsigned char s; unsigned char i;
        s = 0;
        for (i = 0; i < 4; i = i + 1) { s = s + a; }
        return s;
     """, params=("a",)), _fn("f", "return a * 4;", params=("a",))),
    ("while-count", _fn("f", """
        unsigned char n; unsigned char x;
        n = 0; x = a >> 4;
        while (x != 0) { x = x - 1; n = n + 1; }
        return n;
     """, params=("a",)), _fn("f", "return a >> 4;", params=("a",))),
    ("nested-if", _fn("f", """
        if (a < 8) { if (b < 8) { return 1; } return 2; }
        return 3;
     """), _fn("f", """
        if (a >= 8) { return 3; }
        return (b < 8) ? 1 : 2;
     """)),
    ("ternary-chain", _fn("f", "return a == 0 ? b : a;"),
     _fn("f", "if (a != 0) { return a; } return b;")),
    ("div-zero-convention", _fn("f", "return a / b;"),
     _fn("f", "if (b == 0) { return 255; } return a / b;")),
    # inequivalent pairs, off by small deltas or boundary behavior
    ("add-off-by-one", _fn("f", "return a + b;"), _fn("f", "return a + b + 1;")),
    ("signed-vs-unsigned-cmp",
     _fn("f", "if (a < b) { return 1; } return 0;"),
     _fn("f", "if ((char)a < (char)b) { return 1; } return 0;")),
    ("wrong-mask", _fn("f", "return a & 15;", params=("a",)), _fn("f", "return a & 14;", params=("a",))),
    ("shift-off", _fn("f", "return a << 2;", params=("a",)), _fn("f", "return a << 3;", params=("a",))),
    ("boundary-le", _fn("f", "if (a <= 10) { return 1; } return 0;", params=("a",)),
     _fn("f", "if (a < 10) { return 1; } return 0;", params=("a",))),
    ("swap-args", _fn("f", "return a - b;"), _fn("f", "return b - a;")),
    ("overflow-edge", _fn("f", "return a * 2;", params=("a",)),
     _fn("f", "if (a < 128) { return a * 2; } return 255;", params=("a",))),
    ("loop-bound-off", _fn("f", """
        unsigned char s; unsigned char i;
        s = 0;
        for (i = 0; i < 3; i = i + 1) { s = s + a; }
        return s;
     """, params=("a",)), _fn("f", "return a * 4;", params=("a",))),
    ("rem-vs-div", _fn("f", "return a % 3;", params=("a",)), _fn("f", "return a / 3;", params=("a",))),
    ("ternary-flip", _fn("f", "return a > b ? a : b;"),
     _fn("f", "return a > b ? b : a;")),
    # call-count behavior
    ("calls-equal", _fn("f", "log_it(a); return a + b;"),
     _fn("f", "log_it(b); return a + b;")),
    ("calls-extra", _fn("f", "log_it(a); return a;", params=("a",)),
     _fn("f", "log_it(a); log_it(a); return a;", params=("a",))),
    ("calls-branch-equal",
     _fn("f", "if (a < b) { ping(); } else { ping(); } return b;"),
     _fn("f", "ping(); return b;")),
    ("calls-branch-skewed",
     _fn("f", "if (a < b) { ping(); } return b;"),
     _fn("f", "ping(); return b;")),
]


def brute_force(ref_src, cand_src, unroll_bound=32):
    """Exhaustive ground truth: (rets_equal, call_counts_equal)."""
    ref = parse_function(ref_src)
    cand = parse_function(cand_src)
    cfg = ConcreteConfig(unroll_bound=unroll_bound)
    n = len(ref.params)
    assert len(cand.params) == n
    rets_equal = True
    calls_equal = True
    for args in product(range(256), repeat=n):
        r_ret, r_calls = concrete_eval(ref, list(args), cfg)
        c_ret, c_calls = concrete_eval(cand, list(args), cfg)
        if r_ret != c_ret:
            rets_equal = False
        if r_calls != c_calls:
            calls_equal = False
        if not rets_equal and not calls_equal:
            break
    return rets_equal, calls_equal
