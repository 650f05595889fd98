import math

import numpy as np
import pytest

from airykit.errors import DomainError
from airykit.evolution import Grid1D
from airykit.integrand import (
    CallableIntegrand,
    GrowthClass,
    PolynomialIntegrand,
    SampledIntegrand,
    exponential,
    gaussian,
    hermite3,
    hermite3_coefficients,
    linear_combination,
    monomial,
    polynomial,
)


class TestCallableIntegrand:
    def test_monomial(self) -> None:
        f = monomial(3)
        assert f.growth == GrowthClass.POLYNOMIAL
        assert f.analytic
        assert f.degree == 3
        assert f(np.array([2.0, 1j])) == pytest.approx([8.0, -1j])
        assert f.window(1e-10) == (-math.inf, math.inf)

    def test_negative_degree(self) -> None:
        with pytest.raises(DomainError):
            monomial(-1)

    def test_polynomial_trims_degree(self) -> None:
        f = polynomial([1.0, 2.0, 0.0, 0.0])
        assert f.degree == 1
        assert f(np.array([3.0])) == pytest.approx([7.0])
        assert polynomial([]).degree == 0

    def test_polynomial_coefficients(self) -> None:
        f = polynomial([1.0, 2.0, 0.0, 3.0, 0.0])
        assert isinstance(f, PolynomialIntegrand)
        assert isinstance(monomial(4), PolynomialIntegrand)
        assert list(f.coefficients) == [1.0, 2.0, 0.0, 3.0]
        assert list(monomial(2).coefficients) == [0.0, 0.0, 1.0]

    def test_shifted(self) -> None:
        # (1 + 2u)^2 + 1
        shifted = polynomial([1.0, 0.0, 1.0]).shifted(1.0, 2.0)
        assert list(shifted.coef) == pytest.approx([2.0, 4.0, 4.0])
        # (x - iu)^2 at x = 0
        assert list(monomial(2).shifted(0.0, -1j).coef) == pytest.approx(
            [0.0, 0.0, -1.0]
        )

    def test_gaussian_window(self) -> None:
        f = gaussian(2.0, center=1.0)
        lo, hi = f.window(1e-10)
        assert lo == pytest.approx(2 - hi)
        assert float(f(np.array([hi]))[0]) < 1e-10
        assert f.degree is None

    def test_declaration_checks(self) -> None:
        with pytest.raises(DomainError):
            CallableIntegrand(np.sin, GrowthClass.POLYNOMIAL)
        with pytest.raises(DomainError):
            CallableIntegrand(np.sin, GrowthClass.GAUSSIAN, width=0.0)
        with pytest.raises(DomainError):
            CallableIntegrand(np.sin, GrowthClass.COMPACT, support=(1.0, 1.0))

    def test_compact(self) -> None:
        f = CallableIntegrand(
            lambda x: np.where(np.abs(x) < 1, 1.0, 0.0),
            GrowthClass.COMPACT,
            support=(-1.0, 1.0),
        )
        assert not f.analytic
        assert f.window(1e-3) == (-1.0, 1.0)

    def test_exponential(self) -> None:
        f = exponential(2.0)
        assert f.growth == GrowthClass.EXPONENTIAL
        assert f(np.array([0.5])) == pytest.approx([math.e])


class TestHermite3:
    def test_coefficients(self) -> None:
        # H_4^(3)(x, -2) = x^4 - 48x
        assert hermite3_coefficients(4, 2.0) == pytest.approx([0, -48, 0, 0, 1])

    def test_hermite3(self) -> None:
        f = hermite3(3, 1.0)
        assert f.degree == 3
        assert f(np.array([1.0])) == pytest.approx([-5.0])


class TestLinearCombination:
    def test_polynomial(self) -> None:
        f = linear_combination([(2.0, monomial(2)), (-1.0, monomial(5))])
        assert f.growth == GrowthClass.POLYNOMIAL
        assert f.degree == 5
        assert f(np.array([1.0, 2.0])) == pytest.approx([1.0, -24.0])
        assert isinstance(f, PolynomialIntegrand)
        assert list(f.coefficients) == [0.0, 0.0, 2.0, 0.0, 0.0, -1.0]

    def test_gaussian_becomes_compact(self) -> None:
        f = linear_combination([(1.0, gaussian(1.0)), (1.0, gaussian(1.0, 5.0))])
        assert f.growth == GrowthClass.COMPACT
        lo, hi = f.window(1e-10)
        assert lo < -5
        assert hi > 10

    def test_exponential_dominates(self) -> None:
        f = linear_combination([(1.0, exponential(1.0)), (1.0, monomial(2))])
        assert f.growth == GrowthClass.EXPONENTIAL
        assert f.analytic

    def test_empty(self) -> None:
        with pytest.raises(DomainError):
            linear_combination([])


class TestSampledIntegrand:
    def test_interpolates_and_vanishes_outside(self) -> None:
        x = np.linspace(-2.0, 2.0, 401)
        f = SampledIntegrand(x, np.exp(-(x**2)))
        assert f.growth == GrowthClass.COMPACT
        assert f.window(1e-10) == (-2.0, 2.0)
        assert float(f(np.array([0.123]))[0]) == pytest.approx(
            math.exp(-(0.123**2)), abs=1e-5
        )
        assert f(np.array([-3.0, 3.0])) == pytest.approx([0.0, 0.0])

    def test_complex_values(self) -> None:
        x = np.linspace(0.0, 1.0, 11)
        f = SampledIntegrand(x, x + 1j * x)
        assert complex(f(np.array([0.55]))[0]) == pytest.approx(0.55 + 0.55j)

    def test_rejects_complex_points(self) -> None:
        f = SampledIntegrand(np.array([0.0, 1.0]), np.array([1.0, 2.0]))
        with pytest.raises(DomainError):
            f(np.array([0.5 + 0.1j]))

    def test_invalid_samples(self) -> None:
        with pytest.raises(DomainError):
            SampledIntegrand(np.array([0.0]), np.array([1.0]))
        with pytest.raises(DomainError):
            SampledIntegrand(np.array([0.0, 0.0, 1.0]), np.zeros(3))

    def test_from_grid_function(self) -> None:
        grid = Grid1D(-5.0, 5.0, 128)
        gf = grid.sample(lambda x: np.exp(-(x**2)))
        f = SampledIntegrand.from_grid_function(gf)
        assert f.window(1e-10) == (grid.nodes[0], grid.nodes[-1])
