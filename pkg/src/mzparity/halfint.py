"""Exact half-integer arithmetic for angular-momentum labels.

Spin labels such as j = 3/2 cannot be trusted to float equality once they
have been through arithmetic, so j and mu are stored as ``twice`` the value
in an int and converted to float only at the point of numerical evaluation.
"""

from __future__ import annotations

import operator
from dataclasses import dataclass

from .errors import DomainError


@dataclass(frozen=True, order=True)
class HalfInt:
    """A half-integer stored exactly as twice its value."""

    twice: int

    def __post_init__(self) -> None:
        try:
            doubled = operator.index(self.twice)
        except TypeError:
            raise DomainError(
                f"twice must be an integer, got {self.twice!r}"
            ) from None
        object.__setattr__(self, "twice", int(doubled))

    @classmethod
    def coerce(cls, value) -> "HalfInt":
        """Convert an int, an exactly-representable float, or a HalfInt."""
        if isinstance(value, HalfInt):
            return value
        if isinstance(value, bool):
            raise DomainError(f"cannot interpret {value!r} as a half-integer")
        if isinstance(value, float):
            doubled = 2.0 * value
            if doubled != round(doubled):
                raise DomainError(f"{value!r} is not an exact half-integer")
            return cls(int(round(doubled)))
        try:
            return cls(2 * operator.index(value))
        except TypeError:
            raise DomainError(
                f"cannot interpret {value!r} as a half-integer"
            ) from None

    @property
    def value(self) -> float:
        return self.twice / 2.0

    def __float__(self) -> float:
        return self.twice / 2.0

    @property
    def is_integer(self) -> bool:
        return self.twice % 2 == 0

    def __add__(self, other) -> "HalfInt":
        return HalfInt(self.twice + HalfInt.coerce(other).twice)

    __radd__ = __add__

    def __sub__(self, other) -> "HalfInt":
        return HalfInt(self.twice - HalfInt.coerce(other).twice)

    def __rsub__(self, other) -> "HalfInt":
        return HalfInt(HalfInt.coerce(other).twice - self.twice)

    def __neg__(self) -> "HalfInt":
        return HalfInt(-self.twice)

    def __str__(self) -> str:
        if self.twice % 2 == 0:
            return str(self.twice // 2)
        return f"{self.twice}/2"
