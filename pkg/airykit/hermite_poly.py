"""Higher-order Hermite polynomials H_n^(m)(x, y) = exp(y d^m/dx^m) x^n.

Coefficients are kept as Python integers and identities are checked with
``fractions.Fraction`` arithmetic, so every identity test here is exact.
"""
from __future__ import annotations

import json
import math
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

import trafaret as t

from .errors import DomainError

Monomial = tuple[int, int]

_FLOAT_COEFF_BITS = 1000


@dataclass(frozen=True)
class PolyIndex:
    m: int
    n: int

    def __post_init__(self) -> None:
        if not isinstance(self.m, int) or not isinstance(self.n, int):
            raise DomainError("polynomial order and degree must be integers")
        if self.m < 2:
            raise DomainError(f"order m must be >= 2, got {self.m}")
        if self.n < 0:
            raise DomainError(f"degree n must be >= 0, got {self.n}")

    @property
    def n_terms(self) -> int:
        return self.n // self.m + 1

    def with_degree(self, n: int) -> PolyIndex:
        return PolyIndex(m=self.m, n=n)


@dataclass(frozen=True)
class RationalPoly:
    """Bivariate polynomial sum c_ij x^i y^j with exact rational coefficients."""

    coeffs: tuple[tuple[Monomial, Fraction], ...] = ()

    @classmethod
    def from_mapping(cls, mapping: Mapping[Monomial, int | Fraction]) -> RationalPoly:
        items = sorted(
            ((k, Fraction(v)) for k, v in mapping.items() if v != 0),
            key=lambda item: item[0],
        )
        for (i, j), _ in items:
            if i < 0 or j < 0:
                raise DomainError(f"negative exponent in monomial x^{i} y^{j}")
        return cls(coeffs=tuple(items))

    @classmethod
    def zero(cls) -> RationalPoly:
        return cls()

    @classmethod
    def constant(cls, value: int | Fraction) -> RationalPoly:
        return cls.from_mapping({(0, 0): value})

    @classmethod
    def monomial(cls, i: int, j: int = 0, coeff: int | Fraction = 1) -> RationalPoly:
        return cls.from_mapping({(i, j): coeff})

    def as_dict(self) -> dict[Monomial, Fraction]:
        return dict(self.coeffs)

    def __iter__(self) -> Iterator[tuple[Monomial, Fraction]]:
        return iter(self.coeffs)

    def __len__(self) -> int:
        return len(self.coeffs)

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: RationalPoly) -> RationalPoly:
        acc = self.as_dict()
        for k, v in other:
            acc[k] = acc.get(k, Fraction(0)) + v
        return RationalPoly.from_mapping(acc)

    def __neg__(self) -> RationalPoly:
        return self.scale(-1)

    def __sub__(self, other: RationalPoly) -> RationalPoly:
        return self + (-other)

    def scale(self, factor: int | Fraction) -> RationalPoly:
        return RationalPoly.from_mapping({k: v * factor for k, v in self})

    def mul_x(self, power: int = 1) -> RationalPoly:
        return RationalPoly.from_mapping({(i + power, j): v for (i, j), v in self})

    def mul_y(self, power: int = 1) -> RationalPoly:
        return RationalPoly.from_mapping({(i, j + power): v for (i, j), v in self})

    def diff_x(self, order: int = 1) -> RationalPoly:
        return RationalPoly.from_mapping(
            {
                (i - order, j): v * falling_factorial(i, order)
                for (i, j), v in self
                if i >= order
            }
        )

    def diff_y(self, order: int = 1) -> RationalPoly:
        return RationalPoly.from_mapping(
            {
                (i, j - order): v * falling_factorial(j, order)
                for (i, j), v in self
                if j >= order
            }
        )

    def evaluate(self, x: int | Fraction, y: int | Fraction) -> Fraction:
        x, y = Fraction(x), Fraction(y)
        return sum((v * x**i * y**j for (i, j), v in self), Fraction(0))

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        parts = []
        for (i, j), v in self:
            factors = [str(v)] if v != 1 or (i == 0 and j == 0) else []
            if i:
                factors.append("x" if i == 1 else f"x^{i}")
            if j:
                factors.append("y" if j == 1 else f"y^{j}")
            parts.append("*".join(factors))
        return " + ".join(parts)


def falling_factorial(n: int, k: int) -> int:
    """n (n-1) ... (n-k+1); zero when k > n >= 0."""
    if k < 0:
        raise DomainError("falling factorial order must be non-negative")
    if k > n:
        return 0
    return math.factorial(n) // math.factorial(n - k)


@dataclass(frozen=True)
class HermiteTerm:
    r: int
    coeff: int


@dataclass(frozen=True)
class HermitePoly:
    index: PolyIndex
    terms: tuple[HermiteTerm, ...]

    @property
    def m(self) -> int:
        return self.index.m

    @property
    def n(self) -> int:
        return self.index.n

    def to_rational(self) -> RationalPoly:
        return RationalPoly.from_mapping(
            {(self.n - self.m * term.r, term.r): term.coeff for term in self.terms}
        )

    def evaluate(self, x: float, y: float) -> float:
        if max(term.coeff for term in self.terms).bit_length() > _FLOAT_COEFF_BITS:
            return self._evaluate_wide(x, y)
        # Horner in X = x^m with coefficients c_r y^r, then the x^(n - mR) factor.
        big_x = x**self.m
        acc = 0.0
        y_power = 1.0
        for term in self.terms:
            acc = acc * big_x + float(term.coeff) * y_power
            y_power *= y
        last_r = self.terms[-1].r
        return acc * x ** (self.n - self.m * last_r)

    def _evaluate_wide(self, x: float, y: float) -> float:
        # Coefficients beyond float range: sum exactly, round once.
        if not (math.isfinite(x) and math.isfinite(y)):
            raise DomainError("x and y must be finite")
        value = self.evaluate_exact(Fraction(x), Fraction(y))
        try:
            return float(value)
        except OverflowError:
            return math.inf if value > 0 else -math.inf

    def evaluate_exact(self, x: int | Fraction, y: int | Fraction) -> Fraction:
        return self.to_rational().evaluate(x, y)

    def to_payload(self) -> dict[str, Any]:
        return {
            "m": self.m,
            "n": self.n,
            "terms": [{"r": term.r, "coeff": str(term.coeff)} for term in self.terms],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_payload())

    @classmethod
    def create_from_payload(cls, payload: dict[str, Any]) -> HermitePoly:
        try:
            data = HERMITE_PAYLOAD_VALIDATOR.check(payload)
        except t.DataError as exc:
            raise DomainError(f"invalid polynomial payload: {exc.as_dict()}") from exc
        poly = cls(
            index=PolyIndex(m=data["m"], n=data["n"]),
            terms=tuple(
                HermiteTerm(r=item["r"], coeff=int(item["coeff"]))
                for item in data["terms"]
            ),
        )
        if poly != hermite_coefficients(poly.index):
            raise DomainError("payload coefficients do not match H_n^(m)")
        return poly


HERMITE_PAYLOAD_VALIDATOR = t.Dict(
    {
        t.Key("m"): t.Int(gte=2),
        t.Key("n"): t.Int(gte=0),
        t.Key("terms"): t.List(
            t.Dict(
                {
                    t.Key("r"): t.Int(gte=0),
                    t.Key("coeff"): t.Regexp(r"^[0-9]+$"),
                }
            )
        ),
    }
)


def hermite_coefficients(index: PolyIndex) -> HermitePoly:
    n, m = index.n, index.m
    n_fact = math.factorial(n)
    terms = tuple(
        HermiteTerm(
            r=r, coeff=n_fact // (math.factorial(n - m * r) * math.factorial(r))
        )
        for r in range(n // m + 1)
    )
    return HermitePoly(index=index, terms=terms)


def hermite_eval(index: PolyIndex, x: float, y: float) -> float:
    return hermite_coefficients(index).evaluate(x, y)


def _rational(index: PolyIndex) -> RationalPoly:
    return hermite_coefficients(index).to_rational()


def recurrence_step(index: PolyIndex) -> RationalPoly:
    """H_{n+1} = x·H_n + m·y·n!/(n-m+1)!·H_{n-m+1}."""
    m, n = index.m, index.n
    result = _rational(index).mul_x()
    lower = n - m + 1
    if lower >= 0:
        factor = m * (math.factorial(n) // math.factorial(lower))
        result = result + _rational(index.with_degree(lower)).mul_y().scale(factor)
    return result


def diff_x(poly: HermitePoly) -> RationalPoly:
    return poly.to_rational().diff_x()


def diff_y(poly: HermitePoly) -> RationalPoly:
    return poly.to_rational().diff_y()


def ode_residual(index: PolyIndex) -> RationalPoly:
    """(m·y d^m/dx^m + x d/dx - n) H_n^(m)."""
    h = _rational(index)
    return (
        h.diff_x(index.m).mul_y().scale(index.m)
        + h.diff_x().mul_x()
        - h.scale(index.n)
    )


def heat_residual(index: PolyIndex) -> RationalPoly:
    """(d/dy - d^m/dx^m) H_n^(m)."""
    h = _rational(index)
    return h.diff_y() - h.diff_x(index.m)


def apply_heat_operator(poly: RationalPoly, m: int) -> RationalPoly:
    """exp(y d^m/dx^m) applied to a polynomial in x (the series terminates)."""
    if m < 2:
        raise DomainError(f"order m must be >= 2, got {m}")
    if any(j for (_, j), _ in poly):
        raise DomainError("the operand must not depend on y")
    result = RationalPoly.zero()
    term = poly
    r = 0
    while not term.is_zero:
        result = result + term.mul_y(r).scale(Fraction(1, math.factorial(r)))
        term = term.diff_x(m)
        r += 1
    return result


def polynomial_from_coefficients(coeffs: Iterable[int | Fraction]) -> RationalPoly:
    return RationalPoly.from_mapping({(i, 0): c for i, c in enumerate(coeffs)})


def classical_hermite(n: int, x: float) -> float:
    """Physicists' Hermite H_n(x) by H_{k+1} = 2x H_k - 2k H_{k-1}."""
    if n < 0:
        raise DomainError(f"degree must be >= 0, got {n}")
    prev, cur = 0.0, 1.0
    for k in range(n):
        prev, cur = cur, 2 * x * cur - 2 * k * prev
    return cur


def probabilists_hermite(n: int, x: float) -> float:
    """He_n(x) by He_{k+1} = x He_k - k He_{k-1}."""
    if n < 0:
        raise DomainError(f"degree must be >= 0, got {n}")
    prev, cur = 0.0, 1.0
    for k in range(n):
        prev, cur = cur, x * cur - k * prev
    return cur
