"""Iterative recompilation harness tests. Requires a working C compiler."""

import shutil

import pytest

from dscore.recompile import (FAILURE, SUCCESS, HarnessConfig, assemble,
                              recompile, syntax_score)

from conftest import fixture_src

pytestmark = pytest.mark.skipif(
    shutil.which("gcc") is None, reason="no C compiler available")


def test_plain_c_compiles_without_fixups():
    out = recompile("int add(int a, int b) { return a + b; }")
    assert out.status == SUCCESS
    assert out.iterations_used <= 1
    assert not out.actions


def test_ghidra_typedefs_fixed_up():
    src = """
    undefined8 f(undefined8 param_1) {
        undefined4 local_c;
        local_c = (undefined4)param_1;
        return (ulong)local_c;
    }
    """
    out = recompile(src)
    assert out.status == SUCCESS
    assert out.iterations_used <= 10
    assert any(a.kind == "define-intrinsic-typedefs" for a in out.actions)


def test_concat_pseudo_op_rewritten():
    src = """
    ulong f(uint a, uint b) {
        return CONCAT44(a, b);
    }
    """
    out = recompile(src)
    assert out.status == SUCCESS
    assert any(a.kind == "rewrite-pseudo-op-to-helper" for a in out.actions)


def test_undeclared_function_gets_extern():
    out = recompile("int f(int a) { return helper(a) + 1; }")
    assert out.status == SUCCESS


def test_missing_header_symbol_injected():
    out = recompile(
        'int f(char *p) { if (p == NULL) { return 0; } return strlen(p); }')
    assert out.status == SUCCESS


def test_unfixable_source_fails_with_diagnostics():
    out = recompile("int f(int a) { return a[3]; }")
    assert out.status == FAILURE
    assert any("subscripted value" in msg for _, msg in out.diagnostics)


def test_fixture_baselines_fail_finetuned_succeed():
    for fig, phrase in (("fig7", "subscripted value"),
                        ("fig8", "lvalue required")):
        bad = recompile(fixture_src(f"{fig}_baseline"))
        assert bad.status == FAILURE, fig
        assert any(phrase in msg for _, msg in bad.diagnostics), fig
        good = recompile(fixture_src(f"{fig}_finetuned"))
        assert good.status == SUCCESS, fig


def test_all_original_fixtures_recompile():
    for fig in ("fig7", "fig8", "fig9", "fig10"):
        out = recompile(fixture_src(f"{fig}_original"))
        assert out.status == SUCCESS, (fig, out.diagnostics)
        assert out.iterations_used <= 10


def test_fixup_loop_deterministic():
    src = fixture_src("fig7_original")
    runs = [recompile(src) for _ in range(3)]
    first = runs[0]
    for other in runs[1:]:
        assert other.status == first.status
        assert other.iterations_used == first.iterations_used
        assert other.actions == first.actions
        assert assemble(src, other.actions) == assemble(src, first.actions)


def test_assemble_idempotent():
    src = fixture_src("fig7_original")
    out = recompile(src)
    once = assemble(src, out.actions)
    assert assemble(src, out.actions) == once


def test_iteration_cap_respected():
    out = recompile(fixture_src("fig7_original"),
                    HarnessConfig(max_iterations=1))
    # one iteration cannot apply the staged fix-ups for this fixture
    assert out.iterations_used <= 1


def test_syntax_score_mapping():
    good = recompile("int f(void) { return 0; }")
    bad = recompile("int f(int a) { return a[3]; }")
    assert syntax_score(good) == 0.0
    assert syntax_score(bad) == -3.0
