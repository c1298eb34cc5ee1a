"""Config file loading and assembly of the runtime configuration.

Config files are JSON or TOML and mirror the CLI flags; flags win over
file values, which win over defaults.
"""

import json
import shlex
try:
    import tomllib
except ModuleNotFoundError:
    import tomli as tomllib

from .engine import EngineConfig
from .errors import ConfigError
from .readability import ReadabilityConfig
from .recompile import HarnessConfig
from .rewards import GroupConfig
from .score import PenaltyConfig, ScoreConfig


def load_config_file(path) -> dict:
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as ex:
        raise ConfigError(f"cannot read config {path!r}: {ex}") from ex
    text = raw.decode("utf-8")
    if str(path).endswith(".toml"):
        return tomllib.loads(text)
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        try:
            return tomllib.loads(text)
        except tomllib.TOMLDecodeError as ex:
            raise ConfigError(f"config {path!r} is neither valid JSON nor TOML: {ex}") from ex


def _as_cmd(value):
    if value is None:
        return None
    if isinstance(value, str):
        return shlex.split(value)
    return list(value)


def build_score_config(file_cfg: dict = None, *, compiler_cmd=None, solver_cmd=None,
                       timeout_sem=None, max_recompile_iters=None, penalties=None,
                       gamma=None, delta=None, unroll_bound=None) -> ScoreConfig:
    data = dict(file_cfg or {})

    pen_values = penalties if penalties is not None else data.get("penalties")
    if pen_values is None:
        pen_cfg = PenaltyConfig()
    elif isinstance(pen_values, dict):
        def _pen(short, default):
            return float(pen_values.get(short + "_pen",
                                        pen_values.get(short, default)))
        pen_cfg = PenaltyConfig(_pen("syn", -3.0), _pen("ret", -2.0),
                                _pen("call", -1.5))
    else:
        values = list(pen_values)
        if len(values) != 3:
            raise ConfigError("penalties must be three values: syn,ret,call")
        pen_cfg = PenaltyConfig(*(float(v) for v in values))

    read_data = dict(data.get("readability") or {})
    for key in ("gamma", "delta"):
        if key not in read_data and key in data:
            read_data[key] = data[key]
    if gamma is not None:
        read_data["gamma"] = gamma
    if delta is not None:
        read_data["delta"] = delta
    read_cfg = ReadabilityConfig.from_dict(read_data)

    harness_cfg = HarnessConfig(
        compiler_cmd=_as_cmd(compiler_cmd if compiler_cmd is not None
                             else data.get("compiler_cmd")),
        max_iterations=int(max_recompile_iters if max_recompile_iters is not None
                           else data.get("max_recompile_iters", 10)),
        compile_timeout=float(data.get("compile_timeout", 20.0)),
    )

    engine_cfg = EngineConfig(
        unroll_bound=int(unroll_bound if unroll_bound is not None
                         else data.get("unroll_bound", 32)),
        timeout_seconds=float(timeout_sem if timeout_sem is not None
                              else data.get("timeout_sem", 30.0)),
        external_return_value=int(data.get("external_return_value", 0)),
        max_paths=int(data.get("max_paths", 256)),
    )

    return ScoreConfig(
        penalties=pen_cfg,
        readability=read_cfg,
        harness=harness_cfg,
        engine=engine_cfg,
        solver_cmd=_as_cmd(solver_cmd if solver_cmd is not None
                           else data.get("solver_cmd")),
        solver_timeout=float(data.get("solver_timeout", 300.0)),
    )


def build_group_config(file_cfg: dict = None, *, num_generations=None) -> GroupConfig:
    data = dict(file_cfg or {})
    group = dict(data.get("group") or {})
    for key in ("num_generations", "unscorable_reward", "std_floor"):
        if key not in group and key in data:
            group[key] = data[key]
    return GroupConfig(
        num_generations=int(num_generations if num_generations is not None
                            else group.get("num_generations", 3)),
        unscorable_reward=float(group.get("unscorable_reward", -2.0)),
        std_floor=float(group.get("std_floor", 1e-8)),
    )
