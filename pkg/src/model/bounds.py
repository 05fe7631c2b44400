from typing import List, Tuple

from src.exceptions import ParameterError


def lower_bound_innovative(i: int, k: int, d: float) -> float:
    """Classic lower bound 1 - (1 - d)^(k - i) on the innovative-packet probability"""
    if not 0 <= i <= k:
        raise ParameterError(f"need 0 <= i <= k, got i={i}, k={k}")
    if not 0.0 < d <= 1.0:
        raise ParameterError(f"density must lie in (0, 1], got {d}")
    return 1.0 - (1.0 - d) ** (k - i)


def lower_bound_curve(k: int, w: int) -> List[Tuple[int, float]]:
    return [(r, lower_bound_innovative(r, k, w / k)) for r in range(1, k)]
