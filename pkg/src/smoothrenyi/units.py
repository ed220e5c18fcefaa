"""Logarithm-base configuration.

All entropies are computed internally in nats and converted to the
configured base on output. Base 2 (bits) is the default; natural log
can be selected globally or within a scope via :func:`using_log_base`.
"""

from __future__ import annotations

import math
from contextlib import contextmanager

from .errors import ValidationError

_BASE: float = 2.0


def _coerce_base(base) -> float:
    if isinstance(base, str):
        text = base.strip().lower()
        if text == "e":
            return math.e
        try:
            base = float(text)
        except ValueError as exc:
            raise ValidationError(f"unrecognized log base {base!r}") from exc
    base = float(base)
    if not math.isfinite(base) or base <= 1.0:
        raise ValidationError("log base must be a finite number > 1")
    return base


def set_log_base(base) -> None:
    """Set the global output base. Accepts 2, 'e', or any float > 1."""
    global _BASE
    _BASE = _coerce_base(base)


def log_base() -> float:
    return _BASE


def ln_base() -> float:
    """Natural log of the configured base (the nats-per-unit factor)."""
    return math.log(_BASE)


def unit_label() -> str:
    if _BASE == 2.0:
        return "bits"
    if math.isclose(_BASE, math.e):
        return "nats"
    return f"log{_BASE:g}-units"


def from_nats(value: float) -> float:
    return value / math.log(_BASE)


def to_nats(value: float) -> float:
    return value * math.log(_BASE)


@contextmanager
def using_log_base(base):
    """Temporarily switch the output base (restores the previous one)."""
    global _BASE
    previous = _BASE
    set_log_base(base)
    try:
        yield
    finally:
        _BASE = previous
