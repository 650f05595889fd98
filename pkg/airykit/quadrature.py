"""Adaptive Gauss-Kronrod quadrature and series acceleration.

The engine integrates vectorized integrands, real or complex. Every interval is
evaluated with the 7-point Gauss rule embedded in the 15-point Kronrod rule; the
difference of the two is the interval error estimate. Intervals whose error exceeds
their share of the tolerance are bisected, all at once, until the summed estimate is
below the tolerance or the node budget is spent.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any

import numpy as np

from .errors import NonConvergence
from .typedefs import ArrayFunction, FloatArray

logger = logging.getLogger(__name__)

_XGK = np.array(
    [
        0.991455371120812639206854697526329,
        0.949107912342758524526189684047851,
        0.864864423359769072789712788640926,
        0.741531185599394439863864773280788,
        0.586087235467691130294144845693013,
        0.405845151377397166906606412076961,
        0.207784955007898467600689403773245,
        0.000000000000000000000000000000000,
    ]
)
_WGK = np.array(
    [
        0.022935322010529224963732008058970,
        0.063092092629978553290700663189204,
        0.104790010322250183839876322541518,
        0.140653259715525918745189590510238,
        0.169004726639267902826583426598550,
        0.190350578064785409913256402421014,
        0.204432940075298892414161999234649,
        0.209482141084727828012999174891714,
    ]
)
_WG = np.array(
    [
        0.129484966168869693270611432679082,
        0.279705391489276667901467771423780,
        0.381830050505118944950369775488975,
        0.417959183673469387755102040816327,
    ]
)

NODES = np.concatenate((-_XGK[:7], _XGK[::-1]))
KRONROD_WEIGHTS = np.concatenate((_WGK[:7], _WGK[::-1]))
GAUSS_WEIGHTS = np.zeros(15)
for _i, _j in enumerate((1, 3, 5)):
    GAUSS_WEIGHTS[_j] = GAUSS_WEIGHTS[14 - _j] = _WG[_i]
GAUSS_WEIGHTS[7] = _WG[3]

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class QuadResult:
    value: float | complex
    error: float
    n_nodes: int

    def __add__(self, other: "QuadResult") -> "QuadResult":
        return QuadResult(
            value=self.value + other.value,
            error=self.error + other.error,
            n_nodes=self.n_nodes + other.n_nodes,
        )


@dataclass(frozen=True)
class FunctionValue:
    value: float
    est_error: float
    imag: float = 0.0

    def __float__(self) -> float:
        return self.value


def gauss_kronrod(
    f: ArrayFunction, a: FloatArray, b: FloatArray
) -> tuple[np.ndarray, FloatArray, FloatArray]:
    """Apply G7/K15 on each interval [a[i], b[i]].

    Returns the Kronrod estimates, the |K15 - G7| error estimates and the
    integrals of |f| (used for the roundoff floor).
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    half = 0.5 * (b - a)
    center = 0.5 * (b + a)
    x = center[:, None] + half[:, None] * NODES[None, :]
    fx = np.asarray(f(x))
    kronrod = half * (fx @ KRONROD_WEIGHTS)
    gauss = half * (fx @ GAUSS_WEIGHTS)
    resabs = np.abs(half) * (np.abs(fx) @ KRONROD_WEIGHTS)
    return kronrod, np.abs(kronrod - gauss), resabs


def adaptive_integrate(
    f: ArrayFunction,
    a: float,
    b: float,
    *,
    abs_tol: float = 1e-10,
    max_nodes: int = 200_000,
    min_intervals: int = 8,
) -> QuadResult:
    if a == b:
        return QuadResult(value=0.0, error=0.0, n_nodes=0)
    edges = np.linspace(a, b, min_intervals + 1)
    lo, hi = edges[:-1], edges[1:]
    values, errors, resabs = gauss_kronrod(f, lo, hi)
    n_nodes = 15 * len(lo)
    while True:
        total_error = float(errors.sum())
        floor = 100 * _EPS * float(resabs.sum())
        if total_error <= max(abs_tol, floor):
            break
        share = abs_tol / len(lo)
        split = (errors > share) & (errors > 50 * _EPS * resabs)
        if not split.any():
            # roundoff-limited: nothing left that bisection can improve
            break
        if n_nodes + 30 * int(split.sum()) > max_nodes:
            raise NonConvergence(
                "adaptive quadrature exhausted its node budget",
                value=complex(values.sum()),
                est_error=total_error,
                a=a,
                b=b,
                max_nodes=max_nodes,
            )
        mid = 0.5 * (lo[split] + hi[split])
        new_lo = np.concatenate((lo[split], mid))
        new_hi = np.concatenate((mid, hi[split]))
        new_values, new_errors, new_resabs = gauss_kronrod(f, new_lo, new_hi)
        keep = ~split
        lo = np.concatenate((lo[keep], new_lo))
        hi = np.concatenate((hi[keep], new_hi))
        values = np.concatenate((values[keep], new_values))
        errors = np.concatenate((errors[keep], new_errors))
        resabs = np.concatenate((resabs[keep], new_resabs))
        n_nodes += 15 * len(new_lo)
    value: Any = values.sum()
    if np.iscomplexobj(values):
        value = complex(value)
    else:
        value = float(value)
    return QuadResult(value=value, error=float(errors.sum()), n_nodes=n_nodes)


def integrate_to_infinity(
    f: ArrayFunction,
    radius: float,
    *,
    abs_tol: float = 1e-10,
    max_nodes: int = 200_000,
    max_doublings: int = 8,
    start: float = 0.0,
) -> QuadResult:
    """Integrate over [start, inf) for an integrand that decays beyond ``radius``.

    [start, radius] is integrated first; then [R, 2R], [2R, 4R], ... are added
    until the added piece is below ``abs_tol``. The last piece's magnitude is
    folded into the reported error.
    """
    result = adaptive_integrate(
        f, start, radius, abs_tol=abs_tol / 2, max_nodes=max_nodes
    )
    lo = radius
    for _ in range(max_doublings):
        hi = start + 2 * (lo - start)
        piece = adaptive_integrate(
            f, lo, hi, abs_tol=abs_tol / 4, max_nodes=max_nodes
        )
        result = result + piece
        if abs(piece.value) < abs_tol:
            logger.debug(
                "tail converged at radius %.4g with %d nodes", hi, result.n_nodes
            )
            return QuadResult(
                value=result.value,
                error=result.error + abs(piece.value),
                n_nodes=result.n_nodes,
            )
        lo = hi
    raise NonConvergence(
        "truncation radius kept growing without the tail falling below tolerance",
        value=complex(result.value),
        est_error=result.error,
        radius=radius,
        max_doublings=max_doublings,
    )


def euler_sum(terms: np.ndarray, *, start: int = 0) -> tuple[float, float]:
    """Sum an alternating series with the Euler transform.

    The first ``start`` terms are added directly; the partial sums of the rest
    are averaged repeatedly (van Wijngaarden's scheme) down to a single value.
    The error estimate is half the spread of the last two averaged sums.
    """
    terms = np.asarray(terms, dtype=float)
    head = float(terms[:start].sum())
    tail = terms[start:]
    if len(tail) == 0:
        return head, 0.0
    if len(tail) == 1:
        return head + float(tail[0]), abs(float(tail[0]))
    level = np.cumsum(tail)
    while len(level) > 2:
        level = 0.5 * (level[:-1] + level[1:])
    value = 0.5 * (level[0] + level[1])
    return head + float(value), 0.5 * abs(float(level[1] - level[0]))
