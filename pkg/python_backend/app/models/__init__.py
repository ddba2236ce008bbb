from .config import (
    ApproxConfig,
    GridSpec,
    ProfileGrid,
    ProfilesConfig,
    SweepConfig,
    Tolerances,
    Zone,
)
from .field import FieldSample, LogCorrectedFit, RateFit, RateReport
from .profile import ProfileParams, ProfilePoint

__all__ = [
    "ApproxConfig",
    "GridSpec",
    "ProfileGrid",
    "ProfilesConfig",
    "SweepConfig",
    "Tolerances",
    "Zone",
    "FieldSample",
    "LogCorrectedFit",
    "RateFit",
    "RateReport",
    "ProfileParams",
    "ProfilePoint",
]
