import math

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from tools.objective_tool import ObjectiveSpec


class VariationParams(BaseModel):
    """Parameters of the sexual (average) / asexual (normal step) proposal mix."""

    model_config = ConfigDict(frozen=True)

    mutation_std: float = Field(default=100.0, gt=0, description="Std of the asexual normal step")
    mix_probability: float = Field(
        default=0.5, ge=0.0, le=1.0,
        description="Probability that a proposal is the normal step instead of the pairwise average",
    )


def average_mix(a: int, b: int) -> int:
    """Floor of the mean, in exact integer arithmetic."""
    return (a + b) // 2


def round_half_away(value: float) -> int:
    if value >= 0:
        return int(math.floor(value + 0.5))
    return -int(math.floor(-value + 0.5))


def normal_step(x: int, params: VariationParams, rng: np.random.Generator, domain: ObjectiveSpec) -> int:
    """Normal deviate around x, rounded to the nearest integer and clamped into the domain."""
    draw = rng.normal(x, params.mutation_std)
    return domain.clamp(round_half_away(draw))


def propose(
    site_value: int,
    neighbor_value: int,
    params: VariationParams,
    rng: np.random.Generator,
    domain: ObjectiveSpec,
) -> int:
    if rng.random() < params.mix_probability:
        return normal_step(site_value, params, rng, domain)
    return average_mix(site_value, neighbor_value)
