"""Gated scoring pipeline: syntax -> semantics -> readability.

Exactly one stage decides the result. A candidate that fails to compile
is never symbolically executed; tool breakage at any stage produces the
Unscorable outcome rather than a penalty.
"""

from dataclasses import dataclass, field

from . import recompile as rc
from .engine import EngineConfig
from .equivalence import FAIL, PASS, SKIPPED, EquivalenceChecker
from .errors import ConfigError, DialectError, EngineFailure, ParseError, SolverError, ToolError
from .frontend.parser import parse_function
from .readability import ReadabilityConfig, readability_score

SYNTAX_FAIL = "syntax-fail"
SEM_RET_FAIL = "sem-ret-fail"
SEM_CALL_FAIL = "sem-call-fail"
PASS_KIND = "pass"
UNSCORABLE = "unscorable"


@dataclass
class PenaltyConfig:
    syn_pen: float = -3.0
    ret_pen: float = -2.0
    call_pen: float = -1.5


def validate_penalties(cfg: PenaltyConfig,
                       readability_cfg: ReadabilityConfig = None) -> None:
    """Enforce syn_pen < ret_pen < call_pen < -(gamma + delta)."""
    infimum = -1.0 if readability_cfg is None else \
        -(readability_cfg.gamma + readability_cfg.delta)
    if not cfg.syn_pen < cfg.ret_pen:
        raise ConfigError(f"syn_pen ({cfg.syn_pen}) must be < ret_pen ({cfg.ret_pen})")
    if not cfg.ret_pen < cfg.call_pen:
        raise ConfigError(f"ret_pen ({cfg.ret_pen}) must be < call_pen ({cfg.call_pen})")
    if not cfg.call_pen < infimum:
        raise ConfigError(f"call_pen ({cfg.call_pen}) must be < readability "
                          f"infimum ({infimum})")


@dataclass
class ScoreConfig:
    penalties: PenaltyConfig = field(default_factory=PenaltyConfig)
    readability: ReadabilityConfig = field(default_factory=ReadabilityConfig)
    harness: rc.HarnessConfig = field(default_factory=rc.HarnessConfig)
    engine: EngineConfig = field(default_factory=EngineConfig)
    solver_cmd: list = None
    solver_timeout: float = 300.0

    def __post_init__(self):
        validate_penalties(self.penalties, self.readability)


@dataclass
class DScoreResult:
    kind: str
    value: float = None            # absent for unscorable
    diagnostics: dict = field(default_factory=dict)

    @property
    def scorable(self) -> bool:
        return self.kind != UNSCORABLE

    def to_json(self):
        return {"kind": self.kind, "value": self.value,
                "diagnostics": self.diagnostics}


def score(reference: str, candidate: str, cfg: ScoreConfig = None) -> DScoreResult:
    """Score a candidate refinement against the original decompiled source."""
    if cfg is None:
        cfg = ScoreConfig()
    try:
        return _score(reference, candidate, cfg)
    except (ToolError, SolverError, EngineFailure, ParseError) as ex:
        return DScoreResult(UNSCORABLE, diagnostics={
            "stage_error": type(ex).__name__,
            "detail": str(ex),
        })


def _score(reference: str, candidate: str, cfg: ScoreConfig) -> DScoreResult:
    outcome = rc.recompile(candidate, cfg.harness)
    if outcome.status == rc.FAILURE:
        return DScoreResult(SYNTAX_FAIL, cfg.penalties.syn_pen, {
            "stage": "syntax",
            "compile": outcome.to_json(),
        })

    # reference parse/engine trouble is our limitation, not the candidate's
    ref_fn = parse_function(reference)
    cand_fn = parse_function(candidate)

    checker = EquivalenceChecker(cfg.engine, cfg.solver_cmd, cfg.solver_timeout)
    report = checker.check(ref_fn, cand_fn)
    if report.unknown:
        return DScoreResult(UNSCORABLE, diagnostics={
            "stage": "semantic",
            "detail": report.reason,
            "semantic": report.to_json(),
        })
    if report.ret_verdict == FAIL:
        return DScoreResult(SEM_RET_FAIL, cfg.penalties.ret_pen, {
            "stage": "semantic",
            "semantic": report.to_json(),
        })
    if report.call_verdict == FAIL:
        return DScoreResult(SEM_CALL_FAIL, cfg.penalties.call_pen, {
            "stage": "semantic",
            "semantic": report.to_json(),
        })

    value = readability_score(candidate, reference, cfg.readability,
                              cand_fn=cand_fn, ref_fn=ref_fn)
    return DScoreResult(PASS_KIND, value, {
        "stage": "readability",
        "semantic": report.to_json(),
    })
