"""The fixed constants of the construction, as exact rationals with overrides."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import UsageError

DEFAULTS = {
    "C0": Fraction(10) ** 46,
    "C1": Fraction(110),
    "C2": Fraction(10) ** 16,
    "C3": Fraction(28),
    "eps0": Fraction(1, 10 ** 9),
    "eps1": Fraction(1, 10 ** 18),
    "eps2": Fraction(1, 10 ** 6),
    "eps3": Fraction(1, 100),
    "eps4": Fraction(1, 10),
    "eps5": Fraction(1, 4),
}


def parse_rational(text) -> Fraction:
    """Accept 'p/q', integers, decimals and scientific notation (e.g. 1e-9), exactly."""
    if isinstance(text, Fraction):
        return text
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"not a rational number: {text!r}") from None


@dataclass
class ConstantsTable:
    values: dict = field(default_factory=lambda: dict(DEFAULTS))
    overridden: tuple = ()

    @classmethod
    def with_overrides(cls, **overrides) -> "ConstantsTable":
        vals = dict(DEFAULTS)
        changed = []
        for key, raw in overrides.items():
            if raw is None:
                continue
            if key not in vals:
                raise UsageError(f"unknown constant {key!r}")
            val = parse_rational(raw)
            if val <= 0:
                raise UsageError(f"{key} must be positive, got {val}")
            vals[key] = val
            changed.append(key)
        return cls(vals, tuple(changed))

    def __getitem__(self, key) -> Fraction:
        return self.values[key]

    def __getattr__(self, key):
        try:
            return self.__dict__["values"][key]
        except KeyError:
            raise AttributeError(key) from None

    def as_dict(self) -> dict:
        return {"values": {k: v for k, v in self.values.items()}, "overridden": list(self.overridden)}


__all__ = ["ConstantsTable", "DEFAULTS", "parse_rational"]
