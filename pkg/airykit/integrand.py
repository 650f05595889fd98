from __future__ import annotations

import math
from abc import ABC, abstractmethod
from collections.abc import Iterable, Sequence
from enum import Enum
from typing import TYPE_CHECKING

import numpy as np
from numpy.polynomial import Polynomial
from numpy.polynomial import polynomial as P
from scipy.interpolate import PchipInterpolator

from .errors import DomainError
from .hermite_poly import PolyIndex, hermite_coefficients
from .typedefs import ArrayFunction, FloatArray

if TYPE_CHECKING:
    from .evolution import GridFunction


class GrowthClass(str, Enum):
    POLYNOMIAL = "polynomial"
    GAUSSIAN = "gaussian"
    COMPACT = "compact"
    # entire of order at most one, e.g. exp(rate * x)
    EXPONENTIAL = "exponential"


_GROWTH_RANK = {
    GrowthClass.COMPACT: 0,
    GrowthClass.GAUSSIAN: 1,
    GrowthClass.POLYNOMIAL: 2,
    GrowthClass.EXPONENTIAL: 3,
}


class Integrand(ABC):
    """Function of one real variable together with its declared growth.

    Transforms pick their integration path from ``growth`` and ``analytic``:
    entire functions of polynomial growth may be evaluated off the real axis,
    everything else is integrated on real windows.
    """

    growth: GrowthClass

    @abstractmethod
    def __call__(self, x: np.ndarray) -> np.ndarray:
        pass

    @property
    def analytic(self) -> bool:
        return False

    @property
    def degree(self) -> int | None:
        return None

    @abstractmethod
    def window(self, abs_tol: float) -> tuple[float, float]:
        """Interval outside of which |f| is negligible at abs_tol.

        Polynomial integrands have no such interval and return (-inf, inf).
        """


class CallableIntegrand(Integrand):
    def __init__(
        self,
        func: ArrayFunction,
        growth: GrowthClass,
        *,
        analytic: bool = False,
        degree: int | None = None,
        center: float = 0.0,
        width: float = 1.0,
        support: tuple[float, float] | None = None,
    ) -> None:
        if growth == GrowthClass.POLYNOMIAL and (degree is None or degree < 0):
            raise DomainError("polynomial integrands must declare a degree >= 0")
        if growth == GrowthClass.GAUSSIAN and not width > 0:
            raise DomainError(f"gaussian width must be positive, got {width!r}")
        if growth == GrowthClass.COMPACT:
            if support is None or not support[0] < support[1]:
                raise DomainError("compact integrands must declare a support interval")
        self._func = func
        self.growth = growth
        self._analytic = analytic
        self._degree = degree
        self._center = center
        self._width = width
        self._support = support

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return np.asarray(self._func(x))

    @property
    def analytic(self) -> bool:
        return self._analytic

    @property
    def degree(self) -> int | None:
        return self._degree

    def window(self, abs_tol: float) -> tuple[float, float]:
        if self.growth == GrowthClass.COMPACT:
            assert self._support is not None
            return self._support
        if self.growth == GrowthClass.GAUSSIAN:
            half = self._width * math.sqrt(math.log(1 / abs_tol) + 1)
            return self._center - half, self._center + half
        return -math.inf, math.inf


class SampledIntegrand(Integrand):
    """Monotone cubic interpolation of samples, zero outside the sampled range."""

    growth = GrowthClass.COMPACT

    def __init__(self, x: FloatArray, values: np.ndarray) -> None:
        x = np.asarray(x, dtype=float)
        values = np.asarray(values)
        if x.ndim != 1 or x.shape != values.shape or len(x) < 2:
            raise DomainError("samples must be two 1-D arrays of equal length >= 2")
        if not np.all(np.diff(x) > 0):
            raise DomainError("sample nodes must be strictly increasing")
        self._lo = float(x[0])
        self._hi = float(x[-1])
        self._real = PchipInterpolator(x, values.real, extrapolate=False)
        self._imag: PchipInterpolator | None = None
        if np.iscomplexobj(values) and np.any(values.imag != 0):
            self._imag = PchipInterpolator(x, values.imag, extrapolate=False)

    @classmethod
    def from_grid_function(cls, gf: GridFunction) -> SampledIntegrand:
        return cls(gf.grid.nodes, gf.values)

    def __call__(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x)
        if np.iscomplexobj(x):
            raise DomainError(
                "sampled integrands cannot be evaluated off the real axis"
            )
        out = np.nan_to_num(self._real(x), nan=0.0)
        if self._imag is None:
            return out
        return out + 1j * np.nan_to_num(self._imag(x), nan=0.0)

    def window(self, abs_tol: float) -> tuple[float, float]:
        return self._lo, self._hi


class PolynomialIntegrand(CallableIntegrand):
    """Polynomial in the power basis; transforms may use its coefficients."""

    def __init__(self, coeffs: Sequence[float]) -> None:
        c = np.trim_zeros(np.asarray(coeffs, dtype=float), "b")
        if len(c) == 0:
            c = np.zeros(1)
        self.coefficients: FloatArray = c
        super().__init__(
            lambda x: P.polyval(x, c),
            GrowthClass.POLYNOMIAL,
            analytic=True,
            degree=len(c) - 1,
        )

    def shifted(self, shift: complex, scale: complex) -> Polynomial:
        """Coefficients of u -> f(shift + scale·u)."""
        return Polynomial(self.coefficients)(Polynomial([shift, scale]))


def monomial(n: int) -> PolynomialIntegrand:
    if n < 0:
        raise DomainError(f"monomial degree must be >= 0, got {n}")
    return PolynomialIntegrand([0.0] * n + [1.0])


def polynomial(coeffs: Sequence[float]) -> PolynomialIntegrand:
    """Polynomial with coefficients listed from the constant term up."""
    return PolynomialIntegrand(coeffs)


def gaussian(width: float = 1.0, center: float = 0.0) -> CallableIntegrand:
    """exp(-((x - center)/width)^2)."""
    return CallableIntegrand(
        lambda x: np.exp(-(((np.asarray(x) - center) / width) ** 2)),
        GrowthClass.GAUSSIAN,
        analytic=True,
        center=center,
        width=width,
    )


def hermite3_coefficients(n: int, yabs: float) -> FloatArray:
    """Power-basis coefficients of H_n^(3)(x, -yabs), constant term first."""
    poly = hermite_coefficients(PolyIndex(m=3, n=n))
    c = np.zeros(n + 1)
    for term in poly.terms:
        c[n - 3 * term.r] = term.coeff * (-yabs) ** term.r
    return c


def hermite3(n: int, yabs: float) -> CallableIntegrand:
    return polynomial(hermite3_coefficients(n, yabs))


def linear_combination(
    pairs: Iterable[tuple[float, Integrand]],
) -> CallableIntegrand:
    items = list(pairs)
    if not items:
        raise DomainError("a linear combination needs at least one term")
    polys = [(c, f) for c, f in items if isinstance(f, PolynomialIntegrand)]
    if len(polys) == len(items):
        total = Polynomial([0.0])
        for c, f in polys:
            total = total + c * Polynomial(f.coefficients)
        return PolynomialIntegrand(total.coef)

    def func(x: np.ndarray) -> np.ndarray:
        return sum((c * f(x) for c, f in items), np.zeros(np.shape(x)))

    growth = max((f.growth for _, f in items), key=_GROWTH_RANK.__getitem__)
    analytic = all(f.analytic for _, f in items)
    degrees = [f.degree for _, f in items if f.degree is not None]
    if growth == GrowthClass.POLYNOMIAL:
        return CallableIntegrand(
            func, growth, analytic=analytic, degree=max(degrees, default=0)
        )
    if growth == GrowthClass.EXPONENTIAL:
        return CallableIntegrand(func, growth, analytic=analytic)
    windows = [f.window(1e-16) for _, f in items]
    lo = min(w[0] for w in windows)
    hi = max(w[1] for w in windows)
    return CallableIntegrand(
        func, GrowthClass.COMPACT, analytic=analytic, support=(lo, hi)
    )


def exponential(rate: float) -> CallableIntegrand:
    """exp(rate * x)."""
    return CallableIntegrand(
        lambda x: np.exp(rate * np.asarray(x)),
        GrowthClass.EXPONENTIAL,
        analytic=True,
    )
