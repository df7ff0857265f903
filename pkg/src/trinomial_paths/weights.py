from __future__ import annotations

import csv
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Optional, Union

from .core import MissingWeight


Number = Union[int, Fraction]


def exact(value: Any) -> Number:
    """Parse a weight exactly: ints stay ints, decimals become Fractions.

    Floats are converted by their exact binary value.
    """
    if isinstance(value, bool):
        raise ValueError("boolean is not a weight")
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return _normalize(value)
    if isinstance(value, float):
        return _normalize(Fraction(value))
    text = str(value).strip()
    if not text:
        raise ValueError("empty weight")
    return _normalize(Fraction(text))


def _normalize(value: Fraction) -> Number:
    return int(value.numerator) if value.denominator == 1 else value


@dataclass
class WeightTable:
    """Level -> weight map, or the affine rule weight(k) = base + step*k."""

    levels: Dict[int, Number] = field(default_factory=dict)
    base: Optional[Number] = None
    step: Optional[Number] = None

    @staticmethod
    def affine(base: Any, step: Any) -> "WeightTable":
        return WeightTable(base=exact(base), step=exact(step))

    @staticmethod
    def from_mapping(levels: Dict[Any, Any]) -> "WeightTable":
        return WeightTable(levels={int(k): exact(v) for k, v in levels.items()})

    @staticmethod
    def from_csv(path: Path) -> "WeightTable":
        """Read a `level,weight` CSV (header required, one row per level)."""
        levels: Dict[int, Number] = {}
        with path.open("r", encoding="utf-8", newline="") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None or [f.strip() for f in reader.fieldnames] != ["level", "weight"]:
                raise ValueError(f"{path}: expected header 'level,weight'")
            for lineno, row in enumerate(reader, start=2):
                try:
                    level = int(str(row["level"]).strip())
                    levels[level] = exact(row["weight"])
                except (TypeError, ValueError, ZeroDivisionError) as e:
                    raise ValueError(f"{path}:{lineno}: bad row {row!r} ({e})") from e
        return WeightTable(levels=levels)

    @property
    def is_affine(self) -> bool:
        return self.base is not None and self.step is not None

    def weight(self, k: int) -> Number:
        if self.is_affine:
            return _normalize(Fraction(self.base) + Fraction(self.step) * int(k))  # type: ignore[arg-type]
        try:
            return self.levels[int(k)]
        except KeyError:
            raise MissingWeight(f"no weight for level {int(k)}") from None

    def shifted(self, c: Any) -> "WeightTable":
        delta = exact(c)
        if self.is_affine:
            return WeightTable.affine(Fraction(self.base) + Fraction(delta), self.step)  # type: ignore[arg-type]
        return WeightTable(levels={k: _normalize(Fraction(v) + Fraction(delta)) for k, v in self.levels.items()})

    def to_dict(self) -> Dict[str, Any]:
        if self.is_affine:
            return {"base": format_value(self.base), "step": format_value(self.step)}  # type: ignore[arg-type]
        return {"levels": {str(k): format_value(v) for k, v in sorted(self.levels.items())}}


def format_value(value: Number) -> str:
    """Exact text form: decimal integers, otherwise 'p/q'."""
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return str(value.numerator)
        return f"{value.numerator}/{value.denominator}"
    return str(int(value))
