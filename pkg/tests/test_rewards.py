"""Group reward normalization tests."""

import math
import statistics

import pytest
from hypothesis import given, settings, strategies as st

from dscore.errors import ConfigError
from dscore.rewards import GroupConfig, normalize, score_group

from conftest import fixture_src

finite = st.floats(min_value=-10.0, max_value=10.0, allow_nan=False)
groups = st.lists(finite, min_size=2, max_size=8)


def test_frozen_oracle_values():
    got = normalize([-3.0, -2.0, 0.5])
    expected = [-1.0190493307301363, -0.3396831102433787, 1.3587324409735149]
    for g, e in zip(got, expected):
        assert g == pytest.approx(e, abs=1e-4)


def test_matches_population_statistics():
    rewards = [0.3, -1.2, 2.5, 0.0, 0.7]
    mean = statistics.fmean(rewards)
    std = statistics.pstdev(rewards)
    got = normalize(rewards)
    for g, r in zip(got, rewards):
        assert g == pytest.approx((r - mean) / std, abs=1e-12)


def test_zero_variance_gives_zero_advantages():
    assert normalize([0.4, 0.4, 0.4]) == [0.0, 0.0, 0.0]
    assert normalize([-3.0, -3.0]) == [0.0, 0.0]


@given(groups, st.floats(min_value=-5, max_value=5, allow_nan=False))
@settings(max_examples=100, deadline=None)
def test_shift_invariance(rewards, shift):
    base = normalize(rewards)
    shifted = normalize([r + shift for r in rewards])
    for a, b in zip(base, shifted):
        assert a == pytest.approx(b, abs=1e-7)


@given(groups, st.floats(min_value=0.1, max_value=50, allow_nan=False))
@settings(max_examples=100, deadline=None)
def test_positive_scale_equivariance(rewards, scale):
    base = normalize(rewards)
    scaled = normalize([r * scale for r in rewards])
    for a, b in zip(base, scaled):
        assert a == pytest.approx(b, abs=1e-7)


@given(groups)
@settings(max_examples=100, deadline=None)
def test_advantages_have_zero_mean(rewards):
    adv = normalize(rewards)
    assert math.fsum(adv) == pytest.approx(0.0, abs=1e-9)


def test_group_config_validation():
    with pytest.raises(ConfigError):
        GroupConfig(num_generations=0)
    with pytest.raises(ConfigError):
        GroupConfig(std_floor=-1.0)


def test_score_group_end_to_end():
    ref = fixture_src("fig9_original")
    group = score_group(ref, [fixture_src("fig9_baseline"),
                              fixture_src("fig9_finetuned"),
                              ref])
    assert group.rewards[0] == -2.0          # semantic failure penalty
    assert 0.0 < group.rewards[1] < 1.0
    assert group.rewards[2] == 0.0           # identity
    assert group.unscorable_mask == [False, False, False]
    assert group.advantages[1] == max(group.advantages)


def test_score_group_unscorable_substitution():
    ref = "int f(int a) { return a; }"
    group = score_group(ref, ["float f(float x) { return x; }", ref, ref])
    assert group.unscorable_mask == [True, False, False]
    # unscorable slots enter normalization at the substitute reward
    assert group.rewards[0] == -2.0
    assert group.results[0].kind == "unscorable"


def test_score_group_custom_unscorable_reward():
    ref = "int f(int a) { return a; }"
    cfg = GroupConfig(unscorable_reward=-5.0)
    group = score_group(ref, ["float f(float x) { return x; }", ref], cfg)
    assert group.rewards[0] == -5.0


def test_score_group_parallel_matches_serial():
    ref = fixture_src("fig10_original")
    cands = [fixture_src("fig10_baseline"), fixture_src("fig10_finetuned"),
             ref]
    serial = score_group(ref, cands, jobs=1)
    parallel = score_group(ref, cands, jobs=3)
    assert serial.rewards == parallel.rewards
    assert serial.advantages == parallel.advantages
