"""Utilities Module

Helper functions shared by the solver, mesh and benchmark layers.
"""
import math
import os
from fractions import Fraction
from typing import Iterable, List, Tuple

from .exceptions import DenseSizeLimitExceededError, InvalidFileError, ValidationError


def mesh_level(h: float) -> int:
    """
    Return k such that h = 2^-k.

    Args:
        h: Mesh size, must be a reciprocal power of two in (0, 1]

    Returns:
        Refinement level k >= 0

    Raises:
        ValidationError: If h is not a reciprocal power of two
    """
    if not (isinstance(h, (int, float)) and 0.0 < h <= 1.0):
        raise ValidationError(f"Mesh size must lie in (0, 1], got {h}")
    k = int(round(-math.log2(h)))
    if not math.isclose(h, 2.0 ** -k, rel_tol=1e-12):
        raise ValidationError(f"Mesh size must be a reciprocal power of two, got {h}")
    return k


def parse_mesh_size(text: str) -> float:
    """
    Parse a mesh size written as "0.125", "1/8" or "2^-3".

    Args:
        text: Mesh size literal

    Returns:
        Mesh size as a float, validated with mesh_level()
    """
    text = text.strip()
    try:
        if text.startswith("2^"):
            value = 2.0 ** float(text[2:])
        else:
            value = float(Fraction(text))
    except (ValueError, ZeroDivisionError) as e:
        raise ValidationError(f"Cannot parse mesh size {text!r}") from e
    mesh_level(value)
    return value


def parse_mesh_sizes(text: str) -> Tuple[float, ...]:
    """Parse a comma separated list of mesh sizes."""
    sizes = [parse_mesh_size(part) for part in text.split(",") if part.strip()]
    if not sizes:
        raise ValidationError("Empty mesh size list")
    return tuple(sizes)


def validate_input_path(path: str, extensions: Iterable[str]) -> None:
    """
    Validate an input file exists and has an accepted extension.

    Args:
        path: Path to the input file
        extensions: Accepted lower-case extensions including the dot

    Raises:
        InvalidFileError: If file doesn't exist or has wrong extension
    """
    if not path:
        raise InvalidFileError("Input path cannot be empty")

    if not os.path.exists(path):
        raise InvalidFileError(f"File does not exist: {path}")

    accepted: List[str] = list(extensions)
    if not path.lower().endswith(tuple(accepted)):
        raise InvalidFileError(f"File must have one of the extensions {accepted}: {path}")


def check_dense_size_limit(n: int, max_n: int) -> None:
    """
    Refuse dense O(n^3) work above a dimension limit.

    Raises:
        DenseSizeLimitExceededError: If n > max_n
    """
    if n > max_n:
        raise DenseSizeLimitExceededError(n, max_n)


def format_seconds(seconds: float) -> str:
    """
    Format a wall time in human-readable form.

    Args:
        seconds: Duration in seconds

    Returns:
        Formatted string (e.g., "850 ms", "12.4 s", "3.1 min")
    """
    if seconds < 1.0:
        return f"{seconds * 1000:.0f} ms"
    elif seconds < 120.0:
        return f"{seconds:.1f} s"
    return f"{seconds / 60:.1f} min"


def format_mesh_size(h: float) -> str:
    """Format a mesh size as 2^-k."""
    return f"2^-{mesh_level(h)}"
