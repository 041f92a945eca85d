from __future__ import annotations

try:
    from enum import StrEnum
except ImportError:  # Python < 3.11
    from enum import Enum

    class StrEnum(str, Enum):
        """Backport of ``enum.StrEnum`` (Python 3.11)."""

        __str__ = str.__str__
        __format__ = str.__format__

__all__ = ["StrEnum"]
