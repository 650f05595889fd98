"""Integral transforms realizing exp(y·∂^m) on functions of x.

Integrals against the Airy-type kernels have a superexponentially decaying
side and an oscillatory side. Four evaluation paths are used:

* rotation: for entire integrands of order below 3/2 the negative half line
  is traded for the positive one through
  Ai(−w) = e^{iπ/3}Ai(e^{iπ/3}w) + e^{−iπ/3}Ai(e^{−iπ/3}w);
* window: Gaussian-decaying or compactly supported integrands are
  integrated on a finite piece of the real line;
* blocks: everything else is split at consecutive kernel zeros and the
  alternating block sums are Euler-accelerated;
* moments: polynomials against the higher-order kernels, and against the
  even-order Fourier kernels, are summed from closed-form kernel moments.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from numpy.polynomial import Polynomial
from scipy import integrate, optimize, special
from scipy.interpolate import CubicSpline

from .airy_fn import DEFAULT_CONFIG, airy_kernel, airy_kernel_prime, generalized_kernel
from .cache import MemoCache
from .config import QuadratureConfig
from .errors import DegreeTooHigh, DomainError, NonConvergence
from .helpers import check_odd_order, check_positive
from .hermite_poly import PolyIndex, hermite_eval
from .integrand import GrowthClass, Integrand, PolynomialIntegrand, monomial
from .quadrature import (
    KRONROD_WEIGHTS,
    NODES,
    adaptive_integrate,
    euler_sum,
    integrate_to_infinity,
)
from .typedefs import FloatArray

logger = logging.getLogger(__name__)

_ROTATION = complex(math.cos(math.pi / 3), math.sin(math.pi / 3))
_SQRT_2PI = math.sqrt(2 * math.pi)

ComplexFunction = Callable[[np.ndarray], np.ndarray]


class TransformKind(str, Enum):
    GAUSS_WEIERSTRASS = "gauss-weierstrass"
    AIRY = "airy"
    EVEN_HERMITE = "even-hermite"
    ODD_HERMITE = "odd-hermite"


class KernelKind(str, Enum):
    AI = "ai"
    AI_PRIME = "ai-prime"
    GENERALIZED = "generalized"


@dataclass(frozen=True)
class AiryKernel:
    kind: KernelKind
    q: int = 3

    def __post_init__(self) -> None:
        check_odd_order(self.q)
        if self.kind != KernelKind.GENERALIZED and self.q != 3:
            raise DomainError("Ai and Ai' kernels have q = 3")

    def __call__(self, u: np.ndarray, cfg: QuadratureConfig) -> np.ndarray:
        if self.kind == KernelKind.AI:
            return airy_kernel(u)
        if self.kind == KernelKind.AI_PRIME:
            return airy_kernel_prime(u)
        return generalized_kernel(self.q, u, cfg)

    def decay_radius(self, abs_tol: float, degree: int = 0) -> float:
        """Point beyond which the kernel times |u|^degree is below abs_tol."""
        q = self.q
        rate = (1 - 1 / q) * math.sin(math.pi / (q - 1))
        target = math.log(10 / abs_tol)
        u = 1.0
        while rate * u ** (q / (q - 1)) - degree * math.log1p(u) < target:
            u *= 1.2
        return u

    def zeros(self, count: int, cfg: QuadratureConfig) -> FloatArray:
        """First ``count`` zeros on the negative axis, in decreasing order."""
        if self.kind == KernelKind.AI:
            return np.asarray(special.ai_zeros(count)[0])
        if self.kind == KernelKind.AI_PRIME:
            return np.asarray(special.ai_zeros(count)[1])
        return _ZEROS.get_or_create(
            (self.q, count, cfg.abs_tol),
            lambda: _generalized_zeros(self.q, count, cfg),
        )


_ZEROS: MemoCache[FloatArray] = MemoCache(max_entries=16)


def _generalized_zeros(q: int, count: int, cfg: QuadratureConfig) -> FloatArray:
    # zero count up to |u| grows like (1 - 1/q)|u|^{q/(q-1)}/π
    reach = (math.pi * (count + 2) / (1 - 1 / q)) ** ((q - 1) / q) + 2.0
    grid = -np.linspace(0.0, reach, int(reach / 0.05) + 1)
    values = generalized_kernel(q, grid, cfg)
    zeros: list[float] = []
    for i in np.nonzero(np.sign(values[:-1]) * np.sign(values[1:]) < 0)[0]:
        zeros.append(
            optimize.brentq(
                lambda s: float(generalized_kernel(q, np.array([s]), cfg)[0]),
                grid[i + 1],
                grid[i],
                xtol=1e-13,
            )
        )
        if len(zeros) == count:
            break
    if len(zeros) < count:
        raise NonConvergence(
            "could not bracket enough kernel zeros", q=q, count=count, reach=reach
        )
    logger.debug("found %d zeros of Ai^(%d) down to %.4g", count, q, zeros[-1])
    return np.array(zeros)


def _rotation_integral(
    kernel: AiryKernel, g: ComplexFunction, cfg: QuadratureConfig, degree: int
) -> float:
    radius = kernel.decay_radius(cfg.abs_tol, degree)
    positive = integrate_to_infinity(
        lambda u: kernel(u, cfg) * g(u),
        radius,
        abs_tol=cfg.abs_tol / 2,
        max_nodes=cfg.max_nodes,
    )
    rotated = integrate_to_infinity(
        lambda r: kernel(r, cfg) * g(-r * _ROTATION),
        radius,
        abs_tol=cfg.abs_tol / 4,
        max_nodes=cfg.max_nodes,
    )
    value = complex(rotated.value)
    if kernel.kind == KernelKind.AI:
        negative = 2 * value.real
    else:
        negative = -2 * (value * _ROTATION.conjugate()).real
    return complex(positive.value).real + negative


def _window_integral(
    kernel: AiryKernel,
    g: ComplexFunction,
    lo: float,
    hi: float,
    cfg: QuadratureConfig,
) -> float:
    hi = min(hi, kernel.decay_radius(cfg.abs_tol))
    if not lo < hi:
        return 0.0
    depth = max(0.0, -lo)
    # roughly two subintervals per kernel oscillation on the negative side
    n_osc = (1 - 1 / kernel.q) * depth ** (kernel.q / (kernel.q - 1)) / math.pi
    result = adaptive_integrate(
        lambda u: kernel(u, cfg) * g(u),
        lo,
        hi,
        abs_tol=cfg.abs_tol,
        max_nodes=cfg.max_nodes,
        min_intervals=max(8, int(2 * n_osc) + 8),
    )
    return complex(result.value).real


def _block_integral(
    kernel: AiryKernel, g: ComplexFunction, cfg: QuadratureConfig, degree: int
) -> float:
    radius = kernel.decay_radius(cfg.abs_tol, degree)
    q = kernel.q
    # the kernel phase on u > 0 grows like (1 - 1/q)·u^{q/(q-1)}·cos(π/(q-1))
    phase = (1 - 1 / q) * radius ** (q / (q - 1)) * math.cos(math.pi / (q - 1))
    positive = adaptive_integrate(
        lambda u: kernel(u, cfg) * g(u),
        0.0,
        radius,
        abs_tol=cfg.abs_tol / 2,
        max_nodes=cfg.max_nodes,
        min_intervals=max(8, int(2 * phase / math.pi) + 8),
    )
    edges = np.concatenate(([0.0], kernel.zeros(cfg.max_blocks, cfg)))
    terms = np.array(
        [
            complex(
                adaptive_integrate(
                    lambda u: kernel(u, cfg) * g(u),
                    float(edges[k + 1]),
                    float(edges[k]),
                    abs_tol=cfg.abs_tol / len(edges),
                    max_nodes=cfg.max_nodes,
                ).value
            ).real
            for k in range(len(edges) - 1)
        ]
    )
    negative, est_error = euler_sum(terms)
    limit = max(cfg.abs_tol, 1e-6 * max(1.0, abs(negative)))
    if est_error > limit:
        raise NonConvergence(
            "oscillatory tail did not settle under Euler acceleration",
            value=negative,
            est_error=est_error,
            blocks=len(terms),
            kernel=kernel.kind.value,
        )
    logger.debug(
        "block sum over %d blocks: %.12g (+- %.2g)", len(terms), negative, est_error
    )
    return complex(positive.value).real + negative


def kernel_integral(
    kernel: AiryKernel,
    f: Integrand,
    shift: float,
    scale: float,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
    *,
    weight: Polynomial | None = None,
) -> float:
    """∫K(u)·w(u)·f(shift + scale·u)du over the real line.

    ``weight`` is an optional polynomial factor in u.
    """
    extra = 0 if weight is None else weight.degree()

    def g(u: np.ndarray) -> np.ndarray:
        values = f(shift + scale * u)
        if weight is not None:
            values = values * weight(u)
        return values

    if f.growth in (GrowthClass.GAUSSIAN, GrowthClass.COMPACT):
        a, b = f.window(cfg.abs_tol)
        lo, hi = sorted(((a - shift) / scale, (b - shift) / scale))
        return _window_integral(kernel, g, lo, hi, cfg)
    degree = (f.degree or 0) + extra
    if degree > cfg.max_degree + cfg.max_diff_order:
        raise DegreeTooHigh(f"integrand degree {degree} is too high")
    if (
        f.analytic
        and kernel.kind != KernelKind.GENERALIZED
        and f.growth in (GrowthClass.POLYNOMIAL, GrowthClass.EXPONENTIAL)
    ):
        return _rotation_integral(kernel, g, cfg, degree)
    if f.growth == GrowthClass.EXPONENTIAL:
        raise DomainError(
            "exponential integrands need the rotation path (analytic, Ai kernel)"
        )
    return _block_integral(kernel, g, cfg, degree)


def _check_degree(f: Integrand, cfg: QuadratureConfig) -> None:
    if f.degree is not None and f.degree > cfg.max_degree:
        raise DegreeTooHigh(
            f"polynomial degree {f.degree} exceeds max_degree={cfg.max_degree}"
        )


def gauss_weierstrass(
    f: Integrand, x: float, y: float, cfg: QuadratureConfig = DEFAULT_CONFIG
) -> float:
    """(1/(2√(πy)))∫f(ξ)exp(−(x−ξ)²/4y)dξ, evaluated as (1/√π)∫f(x+2√y·s)e^{−s²}ds."""
    if not y > 0:
        raise DomainError(f"the Gauss-Weierstrass transform needs y > 0, got {y!r}")
    _check_degree(f, cfg)
    step = 2 * math.sqrt(y)

    def g(s: np.ndarray) -> np.ndarray:
        return f(x + step * s) * np.exp(-(s**2)) / math.sqrt(math.pi)

    if f.growth in (GrowthClass.GAUSSIAN, GrowthClass.COMPACT):
        a, b = f.window(cfg.abs_tol)
        bound = math.sqrt(math.log(10 / cfg.abs_tol)) + 2.0
        lo = max((a - x) / step, -bound)
        hi = min((b - x) / step, bound)
        if not lo < hi:
            return 0.0
        result = adaptive_integrate(
            g, lo, hi, abs_tol=cfg.abs_tol, max_nodes=cfg.max_nodes
        )
        return complex(result.value).real
    radius = math.sqrt(math.log(10 / cfg.abs_tol)) + 2.0
    right = integrate_to_infinity(
        g, radius, abs_tol=cfg.abs_tol / 2, max_nodes=cfg.max_nodes
    )
    left = integrate_to_infinity(
        lambda s: g(-s), radius, abs_tol=cfg.abs_tol / 2, max_nodes=cfg.max_nodes
    )
    return complex(right.value + left.value).real


def airy_transform(
    f: Integrand, x: float, y: float, cfg: QuadratureConfig = DEFAULT_CONFIG
) -> float:
    """(3y)^(−1/3)∫Ai((ξ−x)/(3y)^(1/3))f(ξ)dξ = ∫Ai(u)f(x + (3y)^(1/3)u)du."""
    if not y > 0:
        raise DomainError(f"the Airy transform needs y > 0, got {y!r}")
    _check_degree(f, cfg)
    c = (3 * y) ** (1 / 3)
    return kernel_integral(AiryKernel(KernelKind.AI), f, x, c, cfg)


def airy_polynomial(
    n: int, x: float, y: float, cfg: QuadratureConfig = DEFAULT_CONFIG
) -> float:
    if n < 0:
        raise DomainError(f"degree must be >= 0, got {n}")
    if n > cfg.max_degree:
        raise DegreeTooHigh(f"degree {n} exceeds max_degree={cfg.max_degree}")
    return airy_transform(monomial(n), x, y, cfg)


@dataclass(frozen=True, eq=False)
class EvenKernel:
    """Tabulated ẽ_{2p}(k) = (1/√(2π))∫exp(−x^{2p})e^{−ikx}dx on k ≥ 0."""

    p: int
    k: FloatArray
    values: FloatArray
    _spline: CubicSpline = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if self.p < 1:
            raise DomainError(f"p must be >= 1, got {self.p}")
        object.__setattr__(self, "_spline", CubicSpline(self.k, self.values))

    @property
    def k_max(self) -> float:
        return float(self.k[-1])

    def __call__(self, k: np.ndarray) -> FloatArray:
        ak = np.abs(np.asarray(k, dtype=float))
        return np.where(ak <= self.k_max, self._spline(np.minimum(ak, self.k_max)), 0.0)

    def moment(self, order: int) -> float:
        return even_kernel_moment(self.p, order)


def even_kernel_moment(p: int, order: int) -> float:
    """(1/√(2π))∫ẽ_{2p}(k)k^order dk.

    The moments are derivatives of exp(−x^{2p}) at 0: the 2j-th one is
    (−1)^j·(2j)!·(−1)^r/r! when 2j = 2p·r, and zero otherwise.
    """
    if not isinstance(p, int) or p < 1:
        raise DomainError(f"p must be an integer >= 1, got {p!r}")
    if order < 0:
        raise DomainError(f"moment order must be >= 0, got {order}")
    if order % 2:
        return 0.0
    j = order // 2
    r, rest = divmod(j, p)
    if rest:
        return 0.0
    return (-1) ** (j + r) * math.factorial(order) / math.factorial(r)


def generalized_kernel_moment(q: int, order: int) -> float:
    """∫Ai^(q)(u)u^order du, summed in the Abel sense.

    The Fourier transform of Ai^(q) is exp(i·t^q/q), so only orders q·r
    survive, with value (−1)^{(q+1)r/2}·(qr)!/(q^r·r!).
    """
    check_odd_order(q)
    if order < 0:
        raise DomainError(f"moment order must be >= 0, got {order}")
    r, rest = divmod(order, q)
    if rest:
        return 0.0
    sign = (-1) ** ((q + 1) * r // 2)
    return sign * math.factorial(order) / (q**r * math.factorial(r))


def _moment_sum(coefficients: np.ndarray, moment: Callable[[int], float]) -> float:
    """Σ Re(c_k)·M_k for the power-basis coefficients c_k of a polynomial in u."""
    total = 0.0
    for k, c in enumerate(coefficients):
        m = moment(k)
        if m:
            total += complex(c).real * m
    return total


_KERNEL_STEP = 0.005
_KERNELS: MemoCache[EvenKernel] = MemoCache(max_entries=16)


def even_kernel_decay_rate(p: int) -> float:
    """C in |ẽ_{2p}(k)| ~ exp(−C·k^{2p/(2p−1)}) from the saddle-point estimate."""
    return (
        (1 - 1 / (2 * p))
        * (2 * p) ** (-1 / (2 * p - 1))
        * math.sin(math.pi / (2 * (2 * p - 1)))
    )


def default_k_max(p: int, degree: int = 0) -> float:
    target = math.log(1e16) + 3.0 * degree
    return (target / even_kernel_decay_rate(p)) ** ((2 * p - 1) / (2 * p))


def even_kernel_build(
    p: int, k_max: float | None = None, cfg: QuadratureConfig = DEFAULT_CONFIG
) -> EvenKernel:
    if not isinstance(p, int) or p < 1:
        raise DomainError(f"p must be an integer >= 1, got {p!r}")
    k_max = default_k_max(p) if k_max is None else check_positive("k_max", k_max)
    n_k = int(math.ceil(k_max / _KERNEL_STEP)) + 1
    k = np.linspace(0.0, k_max, n_k)
    # e^{−x^{2p}} < 1e-17 beyond x_max
    x_max = math.log(1e17) ** (1 / (2 * p))
    cycles = k_max * x_max / (2 * math.pi)
    panels = int(2 * cycles) + 16
    edges = np.linspace(0.0, x_max, panels + 1)
    half = 0.5 * np.diff(edges)
    center = 0.5 * (edges[1:] + edges[:-1])
    xs = (center[:, None] + half[:, None] * NODES[None, :]).ravel()
    ws = (half[:, None] * KRONROD_WEIGHTS[None, :]).ravel() * np.exp(-(xs ** (2 * p)))
    values = np.empty(n_k)
    for start in range(0, n_k, 1024):
        chunk = k[start : start + 1024]
        values[start : start + len(chunk)] = np.cos(np.outer(chunk, xs)) @ ws
    logger.debug("even kernel p=%d tabulated on %d points up to k=%.3g", p, n_k, k_max)
    return EvenKernel(p=p, k=k, values=2 * values / _SQRT_2PI)


def cached_even_kernel(
    p: int, k_max: float | None = None, cfg: QuadratureConfig = DEFAULT_CONFIG
) -> EvenKernel:
    k_max = default_k_max(p) if k_max is None else k_max
    return _KERNELS.get_or_create(
        (p, round(k_max, 6)), lambda: even_kernel_build(p, k_max, cfg)
    )


def even_hermite_transform(
    p: int, n: int, x: float, yabs: float, cfg: QuadratureConfig = DEFAULT_CONFIG
) -> float:
    """(1/√(2π))∫ẽ_{2p}(k)(x − ik·yabs^{1/2p})^n dk via the even k-moments."""
    if not isinstance(p, int) or p < 1:
        raise DomainError(f"p must be an integer >= 1, got {p!r}")
    if not yabs > 0:
        raise DomainError(f"yabs must be positive, got {yabs!r}")
    if n < 0:
        raise DomainError(f"degree must be >= 0, got {n}")
    s = yabs ** (1 / (2 * p))
    total = 0.0
    for j in range(n // 2 + 1):
        total += (
            math.comb(n, 2 * j)
            * x ** (n - 2 * j)
            * (-1) ** j
            * s ** (2 * j)
            * even_kernel_moment(p, 2 * j)
        )
    return total


def even_transform(
    f: Integrand,
    p: int,
    x: float,
    yabs: float,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
) -> float:
    """(1/√(2π))∫ẽ_{2p}(k)·f(x − ik·yabs^{1/2p})dk for an entire integrand f."""
    if not isinstance(p, int) or p < 1:
        raise DomainError(f"p must be an integer >= 1, got {p!r}")
    if not yabs > 0:
        raise DomainError(f"yabs must be positive, got {yabs!r}")
    if not (f.analytic and f.growth == GrowthClass.POLYNOMIAL):
        raise DomainError("the even-order transform needs an entire polynomial")
    _check_degree(f, cfg)
    s = yabs ** (1 / (2 * p))
    if isinstance(f, PolynomialIntegrand):
        return _moment_sum(
            f.shifted(x, -1j * s).coef, lambda k: even_kernel_moment(p, k)
        )
    kernel = cached_even_kernel(p, default_k_max(p, f.degree or 0), cfg)
    shifted = x - 1j * kernel.k * s
    # ẽ is even, so ±k pair up into the real part
    symmetric = kernel.values * np.real(f(shifted))
    return 2 * float(integrate.simpson(symmetric, x=kernel.k)) / _SQRT_2PI


def odd_transform(
    f: Integrand,
    p: int,
    x: float,
    yabs: float,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
) -> float:
    """c^{−1}∫Ai^(q)(σ(ξ−x)/c)f(ξ)dξ with q = 2p+1, c = (q·yabs)^{1/q}, σ = (−1)^p.

    Equals ∫Ai^(q)(u)f(x + σcu)du. The sign σ makes the result
    exp(−yabs·∂^q)f for every p. For q >= 5 a polynomial f is integrated
    through the closed-form kernel moments; other integrands go through
    the real-axis kernel.
    """
    if not isinstance(p, int) or p < 1:
        raise DomainError(f"p must be an integer >= 1, got {p!r}")
    if not yabs > 0:
        raise DomainError(f"yabs must be positive, got {yabs!r}")
    _check_degree(f, cfg)
    q = 2 * p + 1
    c = (q * yabs) ** (1 / q)
    sigma = (-1) ** p
    if q > 3 and isinstance(f, PolynomialIntegrand):
        return _moment_sum(
            f.shifted(x, sigma * c).coef, lambda k: generalized_kernel_moment(q, k)
        )
    if q == 3:
        return kernel_integral(AiryKernel(KernelKind.AI), f, x, sigma * c, cfg)
    return kernel_integral(
        AiryKernel(KernelKind.GENERALIZED, q=q), f, x, sigma * c, cfg
    )


def odd_hermite_transform(
    p: int, n: int, x: float, yabs: float, cfg: QuadratureConfig = DEFAULT_CONFIG
) -> float:
    if n < 0:
        raise DomainError(f"degree must be >= 0, got {n}")
    return odd_transform(monomial(n), p, x, yabs, cfg)


def laplace_airy_identity(
    p: float, cfg: QuadratureConfig = DEFAULT_CONFIG, *, accelerated: bool = False
) -> tuple[float, float]:
    """(∫Ai(t)e^{pt}dt, e^{p³/3}).

    By default the left side goes through the rotation path, which also
    gives the analytic continuation for p < 0. With ``accelerated`` the
    real-axis block sum is used instead, available for p >= 0.
    """
    if not abs(p) <= 3:
        raise DomainError(f"|p| must not exceed 3, got {p!r}")
    kernel = AiryKernel(KernelKind.AI)

    def g(u: np.ndarray) -> np.ndarray:
        return np.exp(p * u)

    if accelerated:
        if p < 0:
            raise DomainError("the real-axis integral diverges for p < 0")
        lhs = _block_integral(kernel, g, cfg, 0)
    else:
        lhs = _rotation_integral(kernel, g, cfg, 0)
    return lhs, math.exp(p**3 / 3)


def airy_derivative_polys(n: int) -> list[tuple[Polynomial, Polynomial]]:
    """(P_k, Q_k) with Ai^{(k)} = P_k·Ai + Q_k·Ai′ for k = 0..n."""
    u = Polynomial([0.0, 1.0])
    P, Q = Polynomial([1.0]), Polynomial([0.0])
    out = [(P, Q)]
    for _ in range(n):
        P, Q = P.deriv() + u * Q, P + Q.deriv()
        out.append((P, Q))
    return out


def expansion_coefficients(
    f: Integrand, yabs: float, N: int, cfg: QuadratureConfig = DEFAULT_CONFIG
) -> list[float]:
    """a_0..a_N with f(x) = Σ a_n·H_n^(3)(x, −yabs).

    a_n is the n-th Taylor coefficient at 0 of exp(yabs·∂³)f, that is
    (−1/c)^n/n!·∫Ai^{(n)}(u)f(cu)du with c = (3·yabs)^{1/3}.
    """
    if not yabs > 0:
        raise DomainError(f"yabs must be positive, got {yabs!r}")
    if N < 0:
        raise DomainError(f"N must be >= 0, got {N}")
    if N > cfg.max_diff_order:
        raise DegreeTooHigh(
            f"N={N} exceeds the stable differentiation order {cfg.max_diff_order}"
        )
    _check_degree(f, cfg)
    c = (3 * yabs) ** (1 / 3)
    ai = AiryKernel(KernelKind.AI)
    ai_prime = AiryKernel(KernelKind.AI_PRIME)
    coefficients = []
    for n, (P, Q) in enumerate(airy_derivative_polys(N)):
        total = 0.0
        if P.degree() > 0 or P.coef[0] != 0:
            total += kernel_integral(ai, f, 0.0, c, cfg, weight=P)
        if Q.degree() > 0 or Q.coef[0] != 0:
            total += kernel_integral(ai_prime, f, 0.0, c, cfg, weight=Q)
        coefficients.append((-1 / c) ** n * total / math.factorial(n))
    return coefficients


def series_eval(a: Sequence[float], yabs: float, x: float) -> float:
    return sum(
        coef * hermite_eval(PolyIndex(m=3, n=n), x, -yabs)
        for n, coef in enumerate(a)
    )


@dataclass(frozen=True)
class Transform:
    """A transform kind with its parameters; hermite kinds carry y = −|y|."""

    kind: TransformKind
    y: float
    p: int | None = None

    def __post_init__(self) -> None:
        if self.kind in (TransformKind.GAUSS_WEIERSTRASS, TransformKind.AIRY):
            if not self.y > 0:
                raise DomainError(f"{self.kind.value} transform needs y > 0")
            if self.p is not None:
                raise DomainError(f"{self.kind.value} transform takes no p")
        else:
            if not self.y < 0:
                raise DomainError(f"{self.kind.value} transform needs y < 0")
            if not isinstance(self.p, int) or self.p < 1:
                raise DomainError(f"{self.kind.value} transform needs p >= 1")

    def apply(
        self, f: Integrand, x: float, cfg: QuadratureConfig = DEFAULT_CONFIG
    ) -> float:
        if self.kind == TransformKind.GAUSS_WEIERSTRASS:
            return gauss_weierstrass(f, x, self.y, cfg)
        if self.kind == TransformKind.AIRY:
            return airy_transform(f, x, self.y, cfg)
        assert self.p is not None
        if self.kind == TransformKind.EVEN_HERMITE:
            return even_transform(f, self.p, x, -self.y, cfg)
        return odd_transform(f, self.p, x, -self.y, cfg)
