from __future__ import annotations

from fractions import Fraction
from typing import Any, Sequence, Tuple

import numpy as np

from ..errors import DimensionError, ValidationError


def parse_fraction(value: Any) -> Fraction:
    """
    Convert ints, Fractions and ``"num/den"`` strings to a Fraction.
    Floats are refused, exact tensors must never silently pick up binary rounding.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (bool, float, np.floating)):
        raise ValidationError(f"expected an exact rational, got float {value!r}")
    if isinstance(value, (int, np.integer)):
        return Fraction(int(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as error:
            raise ValidationError(f"not a rational number: {value!r}") from error
    raise ValidationError(f"cannot convert {type(value)} to a rational number")


def fraction_array(values: Any, shape: Tuple[int, ...]) -> np.ndarray:
    """
    Build a read-only object array of Fractions with the given shape.
    """
    array = np.asarray(values, dtype=object)
    if array.shape != tuple(shape):
        raise DimensionError(f"expected a tensor of shape {tuple(shape)}, got {array.shape}")
    result = np.empty(array.shape, dtype=object)
    for index in np.ndindex(array.shape):
        result[index] = parse_fraction(array[index])
    result.flags.writeable = False
    return result


def zeros_fraction_array(shape: Sequence[int]) -> np.ndarray:
    result = np.empty(tuple(shape), dtype=object)
    result.fill(Fraction(0))
    return result


def to_float_array(values: np.ndarray) -> np.ndarray:
    return np.asarray(values, dtype=float)


def exact_sum(values: np.ndarray) -> Fraction:
    return sum(values.flat, Fraction(0))
