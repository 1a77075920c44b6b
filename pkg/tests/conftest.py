import numpy as np
import pytest

from flexramp.requirements import NetLoadProfile
from flexramp.solver import SolveOptions


@pytest.fixture
def tight_opts():
    """Effectively gap-free solves for equality-grade comparisons."""
    return SolveOptions(mip_gap=1e-9, time_limit=120)


def flat_profile(hours: int, level: float = 100.0, sigma: float = 0.0,
                 ripple=None) -> NetLoadProfile:
    """Constant day, optional fixed quarter pattern added to every hour."""
    quarter = np.full((hours, 4), level)
    if ripple is not None:
        quarter = quarter + np.asarray(ripple, dtype=float)
    return NetLoadProfile(hourly=quarter.mean(axis=1), quarter=quarter,
                          sigma_hourly=np.full(hours, sigma), name="flat")
