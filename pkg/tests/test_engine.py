"""Symbolic engine vs concrete interpreter cross-checks.

The two evaluators are independent implementations; agreement between
them on random inputs is the core soundness check.
"""

import random

import pytest

from dscore.engine import AllocationRegistry, EngineConfig, build_models
from dscore.engine import symval as V
from dscore.engine.concrete import ConcreteConfig, concrete_eval
from dscore.errors import EngineFailure
from dscore.frontend.parser import parse_function

from conftest import fixture_src
from oracle_pairs import PAIRS


def _eval_tree(tree, env):
    """Evaluate a symbolic term under a concrete argument assignment."""
    if tree.op == "const":
        return tree.value
    if tree.op == "sym":
        return env[tree.extra]
    if tree.op == "ite":
        cond = _eval_tree(tree.args[0], env)
        return _eval_tree(tree.args[1 if cond else 2], env)
    ops = {
        "add": V.add, "sub": V.sub, "mul": V.mul,
        "udiv": V.udiv, "urem": V.urem, "sdiv": V.sdiv, "srem": V.srem,
        "and": V.band, "or": V.bor, "xor": V.bxor,
        "shl": V.shl, "lshr": V.lshr, "ashr": V.ashr,
        "eq": V.eq, "ult": V.ult, "ule": V.ule, "slt": V.slt, "sle": V.sle,
    }
    if tree.op in ops:
        a = _eval_tree(tree.args[0], env)
        b = _eval_tree(tree.args[1], env)
        return ops[tree.op](V.const(a, tree.args[0].width),
                            V.const(b, tree.args[1].width)).value
    if tree.op == "not":
        return V.mask(tree.width) ^ _eval_tree(tree.args[0], env)
    if tree.op == "neg":
        return (-_eval_tree(tree.args[0], env)) & V.mask(tree.width)
    if tree.op == "zext":
        return _eval_tree(tree.args[0], env)
    if tree.op == "sext":
        inner = tree.args[0]
        v = _eval_tree(inner, env)
        return V.sext(V.const(v, inner.width), tree.width).value
    if tree.op == "extract":
        v = _eval_tree(tree.args[0], env)
        hi, lo = tree.extra
        return (v >> lo) & ((1 << (hi - lo + 1)) - 1)
    if tree.op == "concat":
        hi, lo = tree.args
        return (_eval_tree(hi, env) << lo.width) | _eval_tree(lo, env)
    raise AssertionError(f"unexpected op {tree.op}")


def _symbolic_ret(src, args):
    fn = parse_function(src)
    model = build_models(fn, {}, EngineConfig(), AllocationRegistry())
    assert model.explored_complete
    env = {f"arg{i}": v for i, v in enumerate(args)}
    return _eval_tree(model.ret_tree, env)


CROSS_CHECK_SOURCES = [
    "unsigned char f(unsigned char a, unsigned char b) { return a * b + 3; }",
    "unsigned char f(unsigned char a, unsigned char b) {"
    " if (a < b) { return b - a; } return a - b; }",
    "unsigned char f(unsigned char a, unsigned char b) {"
    " return (a >> 2) ^ (b << 1); }",
    "unsigned char f(unsigned char a, unsigned char b) {"
    " unsigned char s; unsigned char i; s = 0;"
    " for (i = 0; i < 3; i = i + 1) { s = s + a; }"
    " return s ^ b; }",
    "unsigned char f(unsigned char a, unsigned char b) {"
    " switch (a & 3) {"
    " case 0: return b;"
    " case 1: return b + 1;"
    " case 2: return b + 2;"
    " default: return 0; } }",
    "int f(int a, int b) { return a / (b | 1); }",
    "int f(int a, int b) { return a % (b | 1); }",
]


@pytest.mark.parametrize("src", CROSS_CHECK_SOURCES)
def test_symbolic_matches_concrete_on_random_inputs(src):
    rng = random.Random(1234)
    fn = parse_function(src)
    for _ in range(40):
        args = [rng.randrange(256) for _ in fn.params]
        sym_ret = _symbolic_ret(src, args)
        conc_ret, _ = concrete_eval(fn, args)
        assert sym_ret == conc_ret, (src, args)


def test_symbolic_matches_concrete_on_oracle_pairs():
    rng = random.Random(99)
    for name, ref_src, cand_src in PAIRS:
        for src in (ref_src, cand_src):
            fn = parse_function(src)
            model = build_models(fn, {}, EngineConfig(), AllocationRegistry())
            if not model.explored_complete:
                continue
            for _ in range(10):
                args = [rng.randrange(256) for _ in fn.params]
                env = {f"arg{i}": v for i, v in enumerate(args)}
                assert _eval_tree(model.ret_tree, env) == \
                    concrete_eval(fn, args)[0], (name, args)


def test_call_count_tree():
    src = """
    int f(int a) {
        if (a > 0) { ping(); ping(); } else { pong(); }
        return 0;
    }
    """
    fn = parse_function(src)
    model = build_models(fn, {"ping": 1, "pong": 1}, EngineConfig(),
                         AllocationRegistry())
    assert set(model.count_trees) == {"ping", "pong", "other"}
    pos = {"arg0": 5}
    neg = {"arg0": 2**32 - 5}
    assert _eval_tree(model.count_trees["ping"], pos) == 2
    assert _eval_tree(model.count_trees["pong"], pos) == 0
    assert _eval_tree(model.count_trees["ping"], neg) == 0
    assert _eval_tree(model.count_trees["pong"], neg) == 1


def test_external_calls_return_zero():
    src = "int f(int a) { return helper(a) + 1; }"
    fn = parse_function(src)
    model = build_models(fn, {}, EngineConfig(), AllocationRegistry())
    assert _eval_tree(model.ret_tree, {"arg0": 7}) == 1
    ret, calls = concrete_eval(fn, [7])
    assert ret == 1 and calls == {"helper": 1}


def test_unbounded_concrete_loop_is_engine_failure():
    fn = parse_function("int f(int a) { while (1) { a = a + 1; } return a; }")
    with pytest.raises(EngineFailure):
        concrete_eval(fn, [0])


def test_symbolic_loop_beyond_bound_flags_bounded():
    src = """
    int f(int a) {
        int i;
        for (i = 0; i < a; i = i + 1) { }
        return i;
    }
    """
    fn = parse_function(src)
    model = build_models(fn, {}, EngineConfig(unroll_bound=4),
                         AllocationRegistry())
    assert model.bounded


def test_shared_registry_gives_identical_trees():
    src = fixture_src("fig10_original")
    fn = parse_function(src)
    reg = AllocationRegistry()
    m1 = build_models(fn, {}, EngineConfig(), reg)
    m2 = build_models(fn, {}, EngineConfig(), reg)
    assert m1.ret_tree is m2.ret_tree


def test_concrete_witness_memory_replay():
    """initial_memory lets a solver witness replay byte-for-byte."""
    src = """
    int f(unsigned char *p) {
        if (p == 0) { return -22; }
        return p[0] + p[1];
    }
    """
    fn = parse_function(src)
    base = 0x1_0000_0000
    ret, _ = concrete_eval(fn, [base],
                           initial_memory={base: 3, base + 1: 4})
    assert ret == 7
    ret, _ = concrete_eval(fn, [0])
    assert ret == (2**32 - 22)
