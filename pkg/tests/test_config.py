"""Config file loading and precedence tests."""

import pytest

from dscore.config import (build_group_config, build_score_config,
                           load_config_file)
from dscore.errors import ConfigError


def test_defaults():
    cfg = build_score_config({})
    assert cfg.penalties.syn_pen == -3.0
    assert cfg.penalties.ret_pen == -2.0
    assert cfg.penalties.call_pen == -1.5
    assert cfg.readability.gamma == 0.25
    assert cfg.readability.delta == 0.75
    assert cfg.engine.unroll_bound == 32
    assert cfg.harness.max_iterations == 10
    grp = build_group_config({})
    assert grp.num_generations == 3
    assert grp.unscorable_reward == -2.0


def test_json_config_file(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text('{"gamma": 0.1, "delta": 0.5, "unroll_bound": 16,'
                    ' "penalties": [-4, -3, -2.5]}')
    cfg = build_score_config(load_config_file(path))
    assert cfg.readability.gamma == 0.1
    assert cfg.readability.delta == 0.5
    assert cfg.engine.unroll_bound == 16
    assert cfg.penalties.syn_pen == -4.0


def test_toml_config_file(tmp_path):
    path = tmp_path / "cfg.toml"
    path.write_text('gamma = 0.2\nnum_generations = 5\n'
                    '[penalties]\nsyn = -6\nret = -4\ncall = -3\n')
    file_cfg = load_config_file(path)
    cfg = build_score_config(file_cfg)
    assert cfg.readability.gamma == 0.2
    assert cfg.penalties.syn_pen == -6.0
    assert build_group_config(file_cfg).num_generations == 5


def test_flags_override_file(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text('{"gamma": 0.1, "timeout_sem": 5}')
    cfg = build_score_config(load_config_file(path), gamma=0.3)
    assert cfg.readability.gamma == 0.3
    assert cfg.engine.timeout_seconds == 5.0


def test_invalid_penalty_order_rejected():
    with pytest.raises(ConfigError):
        build_score_config({}, penalties=[-1, -2, -3])


def test_malformed_file_rejected(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text("{ this is not json")
    with pytest.raises(ConfigError):
        load_config_file(path)


def test_compiler_and_solver_commands_parsed():
    cfg = build_score_config({}, compiler_cmd="cc -c -O1",
                             solver_cmd="z3 -in")
    assert cfg.harness.compiler_cmd == ["cc", "-c", "-O1"]
    assert cfg.solver_cmd == ["z3", "-in"]
