import math
from collections.abc import Callable

from .errors import DomainError


def check_odd_order(q: int) -> int:
    if not isinstance(q, int) or q < 3 or q % 2 == 0:
        raise DomainError(f"phase power q must be an odd integer >= 3, got {q!r}")
    return (q - 1) // 2


def check_positive(name: str, value: float) -> float:
    if not value > 0 or not math.isfinite(value):
        raise DomainError(f"{name} must be positive and finite, got {value!r}")
    return value


def check_finite(name: str, value: float) -> float:
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value!r}")
    return value


def is_power_of_two(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0


def central_difference(
    f: Callable[[float], float], x: float, h: float, order: int
) -> float:
    """Centered difference quotient of the given order, O(h^2) accurate.

    Odd orders use half-step offsets so the stencil stays symmetric.
    """
    check_positive("h", h)
    total = 0.0
    for j in range(order + 1):
        total += (-1) ** j * math.comb(order, j) * f(x + (order / 2 - j) * h)
    return total / h**order
