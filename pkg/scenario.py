"""Heterogeneous-network decision matrices drawn from the RAT attribute ranges."""
from typing import List, Optional, Sequence

import numpy as np

from criteria_config import CRITERIA_CONFIG
from models import (
    AttributeId,
    CandidateLabel,
    DecisionMatrix,
    RatProfile,
    RatType,
    ScenarioConfig,
)


def builtin_profiles() -> List[RatProfile]:
    """WiFi, WiMAX, LTE and 5G attribute ranges"""
    return [
        RatProfile(
            rat=RatType(rat),
            ranges={AttributeId(attr): tuple(bounds) for attr, bounds in ranges.items()},
        )
        for rat, ranges in CRITERIA_CONFIG["rat_profiles"].items()
    ]


def derive_stream(seed: int, *keys: int) -> np.random.Generator:
    """Independent random stream for (seed, keys...); the same inputs give the same stream"""
    return np.random.default_rng([seed, *keys])


def derive_seed(seed: int, *keys: int) -> int:
    """64-bit seed derived from (seed, keys...)"""
    return int(np.random.SeedSequence([seed, *keys]).generate_state(1, dtype=np.uint64)[0])


def generate_networks(cfg: ScenarioConfig, stream: np.random.Generator,
                      profiles: Optional[Sequence[RatProfile]] = None) -> DecisionMatrix:
    """
    Sample instances_per_rat candidates per RAT, each attribute uniform on its
    closed range. Rows are grouped WiFi, WiMAX, LTE, 5G.
    """
    profiles = profiles or cfg.profiles or builtin_profiles()
    k = cfg.instances_per_rat

    blocks = []
    labels = []
    for profile in profiles:
        lows, highs = profile.bounds()
        # lo == hi gives lo exactly
        blocks.append(lows + (highs - lows) * stream.random((k, lows.size)))
        labels.extend(CandidateLabel(rat=profile.rat, index=i) for i in range(k))

    return DecisionMatrix.from_array(np.vstack(blocks), labels)
