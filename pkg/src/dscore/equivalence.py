"""Semantic comparison of two functions via symbolic models and SMT.

Gated checks: return values first, then per-callee call counts. A check
can pass, fail (with a concrete witness), or come back unknown when
exploration was incomplete or the solver gave no verdict.
"""

from dataclasses import dataclass, field

from .engine import AllocationRegistry, EngineConfig, build_models
from .engine import symval as V
from .errors import SolverError
from .frontend.metrics import collect_external_calls
from .smt import driver
from .smt.encode import ScriptBuilder

PASS, FAIL, UNKNOWN, SKIPPED = "pass", "fail", "unknown", "skipped"


@dataclass
class Witness:
    """Concrete inputs on which the two functions disagree."""
    kind: str                  # "return" or "calls"
    args: list
    memory: dict               # address -> byte, pre-state
    ref_value: int = None
    cand_value: int = None
    call_name: str = None

    def to_json(self):
        return {
            "kind": self.kind,
            "args": list(self.args),
            "memory": {hex(a): b for a, b in sorted(self.memory.items())},
            "ref_value": self.ref_value,
            "cand_value": self.cand_value,
            "call_name": self.call_name,
        }


@dataclass
class SemanticReport:
    ret_verdict: str
    call_verdict: str
    witness: Witness = None
    reason: str = ""
    ref_model: object = None
    cand_model: object = None
    solver_queries: int = 0

    @property
    def equivalent(self) -> bool:
        return self.ret_verdict in (PASS, SKIPPED) and self.call_verdict == PASS

    @property
    def unknown(self) -> bool:
        return UNKNOWN in (self.ret_verdict, self.call_verdict)

    def to_json(self):
        return {
            "ret_verdict": self.ret_verdict,
            "call_verdict": self.call_verdict,
            "reason": self.reason,
            "witness": self.witness.to_json() if self.witness else None,
            "solver_queries": self.solver_queries,
        }


def _model_to_witness(kind, model, ref_model, param_widths, **extra):
    args = []
    for i, width in enumerate(param_widths):
        args.append(model.get(f"arg{i}", 0))
    memory = {}
    for name, value in model.items():
        if name.startswith("mem_"):
            memory[int(name[4:], 16)] = value & 0xFF
    return Witness(kind=kind, args=args, memory=memory, **extra)


def _eval_under(tree, model):
    """Evaluate a tree to a constant under a solver model."""
    bindings = {}
    for name, sym in V.free_symbols(tree).items():
        bindings[sym] = V.const(model.get(name, 0), sym.width)
    out = V.substitute(tree, bindings)
    return out.value if out.is_const else None


class EquivalenceChecker:
    def __init__(self, cfg: EngineConfig = None, solver_cmd=None,
                 solver_timeout: float = 300.0):
        self.cfg = cfg if cfg is not None else EngineConfig()
        self.solver_cmd = solver_cmd
        self.solver_timeout = solver_timeout

    def build_pair(self, ref_fn, cand_fn):
        """Reference model first, so its pointer chains fix the allocation map."""
        ground_truth = set(collect_external_calls(ref_fn))
        registry = AllocationRegistry()
        ref_model = build_models(ref_fn, ground_truth, self.cfg, registry)
        cand_model = build_models(cand_fn, ground_truth, self.cfg, registry)
        return ref_model, cand_model

    def check(self, ref_fn, cand_fn) -> SemanticReport:
        ref_model, cand_model = self.build_pair(ref_fn, cand_fn)
        return self.check_models(ref_model, cand_model)

    def check_models(self, ref_model, cand_model) -> SemanticReport:
        report = SemanticReport(ret_verdict=UNKNOWN, call_verdict=UNKNOWN,
                                ref_model=ref_model, cand_model=cand_model)
        if not (ref_model.explored_complete and cand_model.explored_complete):
            which = "reference" if not ref_model.explored_complete else "candidate"
            report.reason = f"{which} exploration incomplete"
            return report
        if len(ref_model.param_widths) != len(cand_model.param_widths):
            report.ret_verdict = FAIL
            report.call_verdict = SKIPPED
            report.reason = "parameter count differs"
            report.witness = Witness(kind="return", args=[0] * len(ref_model.param_widths),
                                     memory={})
            return report

        report.ret_verdict = self._check_returns(ref_model, cand_model, report)
        if report.ret_verdict in (FAIL, UNKNOWN):
            if report.ret_verdict == FAIL:
                report.call_verdict = SKIPPED
            return report
        report.call_verdict = self._check_calls(ref_model, cand_model, report)
        return report

    # --- return values ---

    def _check_returns(self, ref_model, cand_model, report):
        if ref_model.is_void and cand_model.is_void:
            return SKIPPED
        if ref_model.is_void or cand_model.is_void:
            report.reason = "one function returns a value, the other is void"
            report.witness = Witness(kind="return", args=[0] * len(ref_model.param_widths),
                                     memory={})
            return FAIL
        width = min(ref_model.return_width, cand_model.return_width)
        ref_tree = V.truncate(ref_model.ret_tree, width)
        cand_tree = V.truncate(cand_model.ret_tree, width)
        if ref_tree is cand_tree:
            return PASS
        status, model = self._query(V.ne(ref_tree, cand_tree),
                                    ref_model, cand_model, report)
        if status == driver.UNSAT:
            return PASS
        if status != driver.SAT:
            report.reason = f"solver returned {status} on return check"
            return UNKNOWN
        report.witness = _model_to_witness(
            "return", model, ref_model, ref_model.param_widths,
            ref_value=_eval_under(ref_tree, model),
            cand_value=_eval_under(cand_tree, model))
        report.reason = "return values differ"
        return FAIL

    # --- call counts ---

    def _check_calls(self, ref_model, cand_model, report):
        names = sorted(set(ref_model.count_trees) | set(cand_model.count_trees))
        zero = V.const(0, 16)
        for name in names:
            ref_tree = ref_model.count_trees.get(name, zero)
            cand_tree = cand_model.count_trees.get(name, zero)
            if ref_tree is cand_tree:
                continue
            status, model = self._query(V.ne(ref_tree, cand_tree),
                                        ref_model, cand_model, report)
            if status == driver.UNSAT:
                continue
            if status != driver.SAT:
                report.reason = f"solver returned {status} on call check for {name!r}"
                return UNKNOWN
            report.witness = _model_to_witness(
                "calls", model, ref_model, ref_model.param_widths,
                ref_value=_eval_under(ref_tree, model),
                cand_value=_eval_under(cand_tree, model),
                call_name=name)
            report.reason = f"call counts differ for {name!r}"
            return FAIL
        return PASS

    # --- solver plumbing ---

    def _query(self, goal, ref_model, cand_model, report):
        builder = ScriptBuilder()
        for assumption in ref_model.assumptions + cand_model.assumptions:
            builder.assert_true(assumption)
        builder.assert_true(goal)
        report.solver_queries += 1
        try:
            return driver.solve(builder.script(), self.solver_cmd, self.solver_timeout)
        except SolverError as ex:
            return f"error: {ex}", {}
