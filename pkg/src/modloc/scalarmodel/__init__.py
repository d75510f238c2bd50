"""Free scalar particle of mass m in 1+1 dimensions, two discretizations."""
from .position import (
    PARITY,
    TIME_REFLECTION,
    Boost,
    PositionModel,
    Translation,
)
from .rapidity import BGLReport, GridError, RapidityModel

__all__ = ["PARITY", "TIME_REFLECTION", "Boost", "PositionModel", "Translation",
           "BGLReport", "GridError", "RapidityModel"]
