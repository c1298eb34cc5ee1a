"""Relative readability scoring.

Two families: a weighted feature-sum model in the style of classic
readability metrics (the "bw" set, compared through a rescaled sigmoid)
and decompilation-specific count features (the "r2i" set, compared
feature-by-feature through a damped log transform). The combined score
is gamma * r_bw + delta * r_r2i and is 0 when candidate and reference
are identical.

Weights are configuration, not ground truth: absolute magnitudes are
only comparable under the same feature table.
"""

import math
from dataclasses import dataclass, field

from .errors import ConfigError
from .frontend import ast as A
from .frontend.lexer import tokenize
from .frontend.parser import parse_function

BW, R2I_CONFLICTING, R2I_GENERIC = "bw", "r2i-conflicting", "r2i-generic"
_FAMILIES = (BW, R2I_CONFLICTING, R2I_GENERIC)


@dataclass(frozen=True)
class FeatureSpec:
    name: str
    family: str
    weight: float
    direction: float = 1.0    # r2i only: 1 = fewer is better, 0 = more is better

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise ConfigError(f"unknown feature family {self.family!r}")
        if not math.isfinite(self.weight):
            raise ConfigError(f"non-finite weight for {self.name!r}")
        if self.family != BW:
            if self.weight < 0:
                raise ConfigError(f"negative r2i weight for {self.name!r}")
            if not 0.0 <= self.direction <= 1.0:
                raise ConfigError(f"direction for {self.name!r} must be in [0, 1]")


# bw weights are "badness" rates: positive weight means more of the
# feature reads worse, so shrinking it raises the relative score
DEFAULT_FEATURES = (
    FeatureSpec("avg_line_length", BW, 1.0),
    FeatureSpec("avg_identifiers_per_line", BW, 1.0),
    FeatureSpec("avg_identifier_length", BW, 1.0),
    FeatureSpec("commas_per_line", BW, 1.0),
    FeatureSpec("parens_per_line", BW, 1.0),
    FeatureSpec("arith_ops_per_line", BW, 1.0),
    FeatureSpec("numeric_literals_per_line", BW, 1.0),
    FeatureSpec("keywords_per_line", BW, 1.0),
    FeatureSpec("max_nesting_depth", BW, 1.0),
    FeatureSpec("blank_line_ratio", BW, 1.0),
    FeatureSpec("non_blank_lines", R2I_GENERIC, 1.0),
    FeatureSpec("total_tokens", R2I_GENERIC, 1.0),
    FeatureSpec("declared_variable_count", R2I_GENERIC, 1.0),
    FeatureSpec("cast_count", R2I_CONFLICTING, 1.0),
    FeatureSpec("goto_count", R2I_CONFLICTING, 1.0),
    FeatureSpec("deref_count", R2I_CONFLICTING, 1.0),
    FeatureSpec("ternary_count", R2I_CONFLICTING, 1.0),
    FeatureSpec("hex_literal_count", R2I_CONFLICTING, 1.0),
)


@dataclass
class ReadabilityConfig:
    gamma: float = 0.25
    delta: float = 0.75
    features: tuple = DEFAULT_FEATURES
    epsilon_guard: float = 1e-9

    def __post_init__(self):
        if self.gamma < 0 or self.delta < 0:
            raise ConfigError("gamma and delta must be non-negative")
        if self.epsilon_guard <= 0:
            raise ConfigError("epsilon_guard must be positive")
        self.features = tuple(self.features)

    def bw_features(self):
        return [f for f in self.features if f.family == BW]

    def r2i_features(self):
        return [f for f in self.features if f.family != BW]

    def to_dict(self):
        return {
            "gamma": self.gamma,
            "delta": self.delta,
            "epsilon_guard": self.epsilon_guard,
            "features": [
                {"name": f.name, "family": f.family, "weight": f.weight,
                 "direction": f.direction}
                for f in self.features
            ],
        }

    @classmethod
    def from_dict(cls, data):
        kwargs = {}
        for key in ("gamma", "delta", "epsilon_guard"):
            if key in data:
                kwargs[key] = float(data[key])
        if "features" in data:
            specs = []
            for row in data["features"]:
                specs.append(FeatureSpec(row["name"], row["family"],
                                         float(row["weight"]),
                                         float(row.get("direction", 1.0))))
            kwargs["features"] = tuple(specs)
        return cls(**kwargs)


@dataclass
class FeatureVector:
    values: dict

    def __getitem__(self, name):
        return self.values[name]


_ARITH_OPS = {"+", "-", "*", "/", "%"}

_KEYWORD_NAMES = None


def extract_features(src: str, fn: A.FunctionAst = None,
                     cfg: ReadabilityConfig = None) -> FeatureVector:
    if fn is None:
        fn = parse_function(src)
    if cfg is None:
        cfg = ReadabilityConfig()
    toks = [t for t in tokenize(src) if t.kind != "eof"]
    lines = src.splitlines() or [""]
    non_blank = [ln for ln in lines if ln.strip()]
    n_lines = max(1, len(non_blank))

    idents = [t for t in toks if t.kind == "id"]
    numbers = [t for t in toks if t.kind in ("int", "char")]
    commas = sum(1 for t in toks if t.kind == "punct" and t.text == ",")
    parens = sum(1 for t in toks if t.kind == "punct" and t.text == "(")
    arith = sum(1 for t in toks if t.kind == "punct" and t.text in _ARITH_OPS)
    keywords = sum(1 for t in toks if t.kind == "kw")

    casts = gotos = derefs = ternaries = 0
    hex_lits = sum(1 for t in toks if t.kind == "int"
                   and t.text.lower().startswith("0x"))
    for node in A.walk(fn):
        if isinstance(node, A.Cast):
            casts += 1
        elif isinstance(node, A.Goto):
            gotos += 1
        elif isinstance(node, A.Unary) and node.op == "*":
            derefs += 1
        elif isinstance(node, A.Ternary):
            ternaries += 1

    values = {
        "avg_line_length": sum(len(ln) for ln in non_blank) / n_lines,
        "avg_identifiers_per_line": len(idents) / n_lines,
        "avg_identifier_length":
            (sum(len(t.text) for t in idents) / len(idents)) if idents else 0.0,
        "commas_per_line": commas / n_lines,
        "parens_per_line": parens / n_lines,
        "arith_ops_per_line": arith / n_lines,
        "numeric_literals_per_line": len(numbers) / n_lines,
        "keywords_per_line": keywords / n_lines,
        "max_nesting_depth": float(_max_depth(fn.body)),
        "blank_line_ratio":
            (len(lines) - len(non_blank)) / len(lines) if lines else 0.0,
        "non_blank_lines": float(len(non_blank)),
        "total_tokens": float(len(toks)),
        "declared_variable_count": float(len(fn.locals) + len(fn.params)),
        "cast_count": float(casts),
        "goto_count": float(gotos),
        "deref_count": float(derefs),
        "ternary_count": float(ternaries),
        "hex_literal_count": float(hex_lits),
    }
    known = {f.name for f in cfg.features}
    missing = known - set(values)
    if missing:
        raise ConfigError(f"no extractor for features {sorted(missing)}")
    return FeatureVector(values)


def _max_depth(node, depth=0):
    best = depth
    for child in node.children():
        if isinstance(child, A.Node):
            inc = 1 if isinstance(child, (A.Block, A.If, A.While, A.DoWhile,
                                          A.For, A.Switch)) else 0
            best = max(best, _max_depth(child, depth + inc))
    return best


def rescaled_sigmoid(t: float) -> float:
    """Odd sigmoid onto (-1, 1); equals tanh(t/2)."""
    return math.tanh(t / 2.0)


def r_bw(cand: FeatureVector, ref: FeatureVector, cfg: ReadabilityConfig = None) -> float:
    if cfg is None:
        cfg = ReadabilityConfig()
    specs = cfg.bw_features()
    mul_cand = sum(f.weight * cand[f.name] for f in specs)
    mul_ref = sum(f.weight * ref[f.name] for f in specs)
    denom = max(abs(min(mul_cand, mul_ref)), cfg.epsilon_guard)
    return rescaled_sigmoid((mul_ref - mul_cand) / denom)


def r_r2i(cand: FeatureVector, ref: FeatureVector, cfg: ReadabilityConfig = None) -> float:
    if cfg is None:
        cfg = ReadabilityConfig()
    specs = cfg.r2i_features()
    if not specs:
        return 0.0
    total_w = sum(f.weight for f in specs)
    if total_w <= 0:
        return 0.0
    score = 0.0
    for f in specs:
        x = cand[f.name] - ref[f.name]
        damped = math.exp(-_signed_log(x))
        r = f.direction
        contribution = r * damped + (1.0 - r) * (1.0 - damped) - r
        score += (f.weight / total_w) * contribution
    return max(-1.0, min(1.0, score))


def _signed_log(x: float) -> float:
    return math.copysign(math.log10(1.0 + abs(x)), x)


def readability_score(cand_src: str, ref_src: str,
                      cfg: ReadabilityConfig = None,
                      cand_fn: A.FunctionAst = None,
                      ref_fn: A.FunctionAst = None) -> float:
    if cfg is None:
        cfg = ReadabilityConfig()
    cand_vec = extract_features(cand_src, cand_fn, cfg)
    ref_vec = extract_features(ref_src, ref_fn, cfg)
    return cfg.gamma * r_bw(cand_vec, ref_vec, cfg) + \
        cfg.delta * r_r2i(cand_vec, ref_vec, cfg)
