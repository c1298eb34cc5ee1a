"""Group-relative reward normalization for trainer integration.

Each reference function gets a group of candidate rewards; advantages
are (r - mean) / population-std, zeroed when the group is (nearly)
constant. Unscorable candidates receive a configurable stand-in reward
and are flagged in the mask.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .errors import ConfigError
from .score import ScoreConfig, score


@dataclass
class GroupConfig:
    num_generations: int = 3
    unscorable_reward: float = -2.0     # mirrors the return-mismatch penalty
    std_floor: float = 1e-8

    def __post_init__(self):
        if self.num_generations < 1:
            raise ConfigError("num_generations must be positive")
        if self.std_floor <= 0:
            raise ConfigError("std_floor must be positive")


@dataclass
class RewardGroup:
    reference_id: str
    rewards: list
    advantages: list
    unscorable_mask: list
    results: list = None

    def to_json(self):
        return {
            "reference_id": self.reference_id,
            "rewards": list(self.rewards),
            "advantages": list(self.advantages),
            "unscorable_mask": list(self.unscorable_mask),
            "results": [r.to_json() for r in self.results] if self.results else None,
        }


def normalize(rewards, cfg: GroupConfig = None):
    """(r - mean) / population-std; all zeros when the spread is below the floor."""
    if cfg is None:
        cfg = GroupConfig()
    n = len(rewards)
    if n == 0:
        return []
    mean = math.fsum(rewards) / n
    var = math.fsum((r - mean) ** 2 for r in rewards) / n
    std = math.sqrt(var)
    if std < cfg.std_floor:
        return [0.0] * n
    return [(r - mean) / std for r in rewards]


def score_group(reference: str, candidates, cfg: GroupConfig = None,
                score_cfg: ScoreConfig = None, reference_id: str = "",
                jobs: int = 1) -> RewardGroup:
    if cfg is None:
        cfg = GroupConfig()
    if not candidates:
        raise ValueError("candidates must be non-empty")
    if score_cfg is None:
        score_cfg = ScoreConfig()
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(lambda c: score(reference, c, score_cfg),
                                    candidates))
    else:
        results = [score(reference, c, score_cfg) for c in candidates]
    rewards = []
    mask = []
    for result in results:
        if result.scorable:
            rewards.append(result.value)
            mask.append(False)
        else:
            rewards.append(cfg.unscorable_reward)
            mask.append(True)
    return RewardGroup(
        reference_id=reference_id,
        rewards=rewards,
        advantages=normalize(rewards, cfg),
        unscorable_mask=mask,
        results=results,
    )
