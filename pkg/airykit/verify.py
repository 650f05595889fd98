"""Invariant suites behind ``airykit verify``.

Each check returns a :class:`CheckResult`; a suite passes when every check
that is not marked ``reported`` passes. Reported checks document known
discrepancies (identities that do not hold for the stated definitions) and
are printed without affecting the exit status.
"""

import logging
import math
from collections.abc import Callable, Iterator
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy import special

from . import airy_fn, evolution, hermite_poly, transforms
from .config import QuadratureConfig
from .errors import AirykitError
from .hermite_poly import PolyIndex, RationalPoly
from .integrand import exponential, gaussian, hermite3, linear_combination, monomial

logger = logging.getLogger(__name__)


class Suite(str, Enum):
    HERMITE = "hermite"
    AIRY = "airy"
    TRANSFORMS = "transforms"
    EVOLUTION = "evolution"
    ALL = "all"


@dataclass(frozen=True)
class CheckResult:
    suite: Suite
    name: str
    passed: bool
    detail: str = ""
    reported: bool = False

    @property
    def counts(self) -> bool:
        return not self.reported


Check = Callable[[QuadratureConfig], Iterator[CheckResult]]


def _check(
    suite: Suite, name: str, error: float, tol: float, **inputs: object
) -> CheckResult:
    args = " ".join(f"{k}={v}" for k, v in inputs.items())
    detail = f"err={error:.3g} tol={tol:.1g}" + (f" {args}" if args else "")
    return CheckResult(suite, name, bool(error <= tol), detail)


def _hermite_identities(cfg: QuadratureConfig) -> Iterator[CheckResult]:
    failures = 0
    for m in range(2, 7):
        for n in range(25):
            index = PolyIndex(m=m, n=n)
            poly = hermite_poly.hermite_coefficients(index)
            exact = poly.to_rational()
            checks = {
                "ode": hermite_poly.ode_residual(index).is_zero,
                "heat": hermite_poly.heat_residual(index).is_zero,
                "recurrence": hermite_poly.recurrence_step(index)
                == hermite_poly.hermite_coefficients(index.with_degree(n + 1))
                .to_rational(),
                "operator": hermite_poly.apply_heat_operator(
                    RationalPoly.monomial(n), m
                )
                == exact,
                "y=0": poly.evaluate_exact(3, 0) == 3**n,
            }
            for name, ok in checks.items():
                if not ok:
                    failures += 1
                    yield CheckResult(
                        Suite.HERMITE, f"hermite {name}", False, f"m={m} n={n}"
                    )
    yield CheckResult(
        Suite.HERMITE,
        "exact identities m<=6 n<=24",
        failures == 0,
        f"{failures} failed" if failures else "",
    )


def _hermite_reductions(cfg: QuadratureConfig) -> Iterator[CheckResult]:
    worst = 0.0
    for n in range(11):
        for x in np.linspace(-2, 2, 9):
            h2 = hermite_poly.hermite_eval(PolyIndex(2, n), 2 * x, -1)
            he = hermite_poly.hermite_eval(PolyIndex(2, n), x, -0.5)
            ref_h = hermite_poly.classical_hermite(n, x)
            ref_he = hermite_poly.probabilists_hermite(n, x)
            worst = max(
                worst,
                abs(h2 - ref_h) / max(1.0, abs(ref_h)),
                abs(he - ref_he) / max(1.0, abs(ref_he)),
            )
    yield _check(Suite.HERMITE, "classical reductions", worst, 1e-12)


def _airy_values(cfg: QuadratureConfig) -> Iterator[CheckResult]:
    worst = 0.0
    worst_imag = 0.0
    for t in np.linspace(-10, 5, 31):
        value = airy_fn.airy(float(t), cfg)
        worst = max(worst, abs(value.value - special.airy(t)[0]))
        worst_imag = max(worst_imag, abs(value.imag) - value.est_error)
    yield _check(Suite.AIRY, "Ai against scipy on [-10, 5]", worst, 1e-9)
    yield _check(Suite.AIRY, "realness", max(worst_imag, 0.0), 1e-12)


def _airy_scaling(cfg: QuadratureConfig) -> Iterator[CheckResult]:
    worst = 0.0
    for x in range(-5, 6):
        for y in (0.25, 1 / 3, 1.0, 4.0):
            defect, bound = airy_fn.airy_scaling_defect(float(x), y, cfg)
            worst = max(worst, defect - 2 * bound)
    yield _check(Suite.AIRY, "two-variable scaling law", max(worst, 0.0), 1e-12)


def _airy_odes(cfg: QuadratureConfig) -> Iterator[CheckResult]:
    worst = 0.0
    for x in (-3.0, 0.0, 2.0):
        for y in (0.5, 1.0, 2.0):
            worst = max(worst, airy_fn.ode_residual_airy_two_var(x, y, cfg=cfg))
    yield _check(Suite.AIRY, "3y Ai'' - x Ai = 0", worst, 1e-8)
    for q in (3, 5, 7):
        worst = max(
            airy_fn.ode_residual_generalized(q, x, cfg=cfg) for x in (-2.0, 0.5, 2.0)
        )
        yield _check(Suite.AIRY, f"generalized ODE q={q}", worst, 1e-8)
    for q in (3, 5):
        worst = max(
            airy_fn.heat_residual_generalized_two_var(q, x, 1.0, cfg=cfg)
            for x in (-1.0, 1.0)
        )
        yield _check(Suite.AIRY, f"higher-order heat equation q={q}", worst, 1e-5)


def _airy_generalized(cfg: QuadratureConfig) -> Iterator[CheckResult]:
    for q in (3, 5, 7, 9):
        value = airy_fn.airy_generalized(q, 0.0, cfg).value
        error = abs(value - airy_fn.generalized_at_zero(q))
        yield _check(Suite.AIRY, f"Ai^({q})(0) closed form", error, 1e-9)
    lhs, rhs = transforms.laplace_airy_identity(0.0, cfg)
    yield _check(Suite.AIRY, "integral of Ai is 1", abs(lhs - rhs), 1e-6)


def _watson(cfg: QuadratureConfig) -> Iterator[CheckResult]:
    exact = math.gamma(1.25) * math.cos(math.pi / 8)
    error = abs(airy_fn.watson_w(0.0, cfg).value - exact)
    yield _check(Suite.AIRY, "W(0) closed form", error, 1e-9)
    worst = max(
        airy_fn.ode_residual_watson_kernel(x, cfg) for x in (-2.0, -0.5, 0.0, 1.0)
    )
    yield _check(Suite.AIRY, "K''' - 64ixK = 16", worst, 1e-6)
    printed = airy_fn.ode_residual_watson(0.0, cfg=cfg)
    yield CheckResult(
        Suite.AIRY,
        "W'' + 4x^2 W = 0 (printed form)",
        printed <= 1e-5,
        f"residual at x=0 is {printed:.6g}; the identity does not hold for W",
        reported=True,
    )


def _transform_monomials(cfg: QuadratureConfig) -> Iterator[CheckResult]:
    worst = 0.0
    where = ""
    for n in range(9):
        f = monomial(n)
        for y in (0.5, 1.0, 2.0):
            for x in range(-3, 4):
                value = transforms.airy_transform(f, float(x), y, cfg)
                exact = hermite_poly.hermite_eval(PolyIndex(3, n), x, y)
                error = abs(value - exact) / max(1.0, abs(exact))
                if error > worst:
                    worst, where = error, f"n={n} x={x} y={y}"
    yield _check(
        Suite.TRANSFORMS, "Airy transform of monomials", worst, 1e-6, worst_at=where
    )


def _transform_linearity(cfg: QuadratureConfig) -> Iterator[CheckResult]:
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(5):
        alpha, beta = rng.uniform(-2, 2, size=2)
        f, g = monomial(3), exponential(0.5)
        combined = linear_combination([(alpha, f), (beta, g)])
        lhs = transforms.airy_transform(combined, 0.3, 1.0, cfg)
        rhs = alpha * transforms.airy_transform(
            f, 0.3, 1.0, cfg
        ) + beta * transforms.airy_transform(g, 0.3, 1.0, cfg)
        worst = max(worst, abs(lhs - rhs))
    yield _check(Suite.TRANSFORMS, "linearity", worst, 1e-8)


def _transform_hermite(cfg: QuadratureConfig) -> Iterator[CheckResult]:
    worst = 0.0
    for p in (1, 2):
        for n in range(7):
            for x in (-1.0, 0.0, 1.5):
                exact = hermite_poly.hermite_eval(PolyIndex(2 * p, n), x, -0.7)
                value = transforms.even_hermite_transform(p, n, x, 0.7, cfg)
                worst = max(worst, abs(value - exact) / max(1.0, abs(exact)))
    yield _check(Suite.TRANSFORMS, "even-order Hermite transform", worst, 1e-6)
    worst = 0.0
    for p in (1, 2):
        for n in range(7):
            for x in (0.0, 0.5):
                exact = hermite_poly.hermite_eval(PolyIndex(2 * p + 1, n), x, -0.7)
                value = transforms.odd_hermite_transform(p, n, x, 0.7, cfg)
                worst = max(worst, abs(value - exact) / max(1.0, abs(exact)))
    yield _check(Suite.TRANSFORMS, "odd-order Hermite transform", worst, 1e-5)


def _transform_identities(cfg: QuadratureConfig) -> Iterator[CheckResult]:
    worst = 0.0
    for p in (-1.0, 0.0, 0.5, 1.0, 2.0):
        lhs, rhs = transforms.laplace_airy_identity(p, cfg)
        worst = max(worst, abs(lhs - rhs))
    yield _check(Suite.TRANSFORMS, "Laplace identity e^{p^3/3}", worst, 1e-5)
    worst = 0.0
    for m in range(9):
        a = transforms.expansion_coefficients(hermite3(m, 1.0), 1.0, 8, cfg)
        delta = np.zeros(9)
        delta[m] = 1.0
        worst = max(worst, float(np.max(np.abs(np.array(a) - delta))))
    yield _check(Suite.TRANSFORMS, "expansion round trip", worst, 1e-6)
    worst = 0.0
    for x in (-1.0, 0.0, 2.0):
        value = transforms.gauss_weierstrass(monomial(4), x, 0.5, cfg)
        exact = hermite_poly.hermite_eval(PolyIndex(2, 4), x, 0.5)
        worst = max(worst, abs(value - exact))
    yield _check(Suite.TRANSFORMS, "Gauss-Weierstrass of x^4", worst, 1e-8)


def _wide_gaussian(grid: evolution.Grid1D) -> evolution.GridFunction:
    return grid.sample(lambda x: np.exp(-((x / 2) ** 2)))


def _evolution_unitarity(cfg: QuadratureConfig) -> Iterator[CheckResult]:
    grid = evolution.Grid1D(-60.0, 60.0, 2048)
    rng = np.random.default_rng(11)
    worst = 0.0
    for _ in range(50):
        center, width, k0 = rng.uniform(-10, 10), rng.uniform(1, 3), rng.uniform(-2, 2)
        psi = grid.sample(
            lambda x: np.exp(-(((x - center) / width) ** 2) + 1j * k0 * x)
        )
        for m in (3, 5):
            out = evolution.propagate(evolution.SpectralPropagator(m, 0.3), psi)
            worst = max(worst, abs(out.norm() - psi.norm()) / psi.norm())
        out = evolution.schrodinger_evolve(psi, evolution.SchrodingerParams(0.5, 1.0))
        worst = max(worst, abs(out.norm() - psi.norm()) / psi.norm())
    yield _check(Suite.EVOLUTION, "unitarity", worst, 1e-12)


def _evolution_paths(cfg: QuadratureConfig) -> Iterator[CheckResult]:
    grid = evolution.Grid1D(-60.0, 60.0, 2048)
    g = _wide_gaussian(grid)
    f = gaussian(width=2.0)
    nodes = grid.nodes
    for y in (0.25, 1.0):
        spectral = evolution.propagate(evolution.SpectralPropagator(3, y), g)
        worst = 0.0
        for j in range(grid.n_points // 2 - 400, grid.n_points // 2 + 401, 100):
            exact = transforms.airy_transform(f, float(nodes[j]), y, cfg)
            worst = max(worst, abs(spectral.values[j] - exact))
        yield _check(Suite.EVOLUTION, "spectral vs quadrature", worst, 1e-5, y=y)
        pde = evolution.airy_pde_solve(g, y)
        backward = evolution.propagate(evolution.SpectralPropagator(3, -y), g)
        inner = g.interior()
        error = float(np.max(np.abs(pde.values[inner] - backward.values[inner])))
        yield _check(Suite.EVOLUTION, "Airy PDE vs propagate(3, -y)", error, 1e-5, y=y)
    once = evolution.airy_pde_solve(g, 1.0)
    twice = evolution.airy_pde_solve(evolution.airy_pde_solve(g, 0.4), 0.6)
    inner = g.interior()
    error = float(np.max(np.abs(once.values[inner] - twice.values[inner])))
    yield _check(Suite.EVOLUTION, "translation property", error, 1e-5)


def _evolution_ehrenfest(cfg: QuadratureConfig) -> Iterator[CheckResult]:
    grid = evolution.Grid1D(-60.0, 60.0, 2048)
    k0, b, tau = 0.5, 1.0, 1.5
    psi = grid.sample(lambda x: np.exp(-(x**2) / 8 + 1j * k0 * x))
    _, x0, _ = evolution.observables(psi)
    out = evolution.schrodinger_evolve(psi, evolution.SchrodingerParams(tau, b))
    _, x1, k1 = evolution.observables(out)
    expected = x0 + 2 * k0 * tau - b * tau**2
    yield _check(Suite.EVOLUTION, "Ehrenfest <x>", abs(x1 - expected), 1e-4)
    yield _check(Suite.EVOLUTION, "Ehrenfest <k>", abs(k1 - (k0 - b * tau)), 1e-4)
    # finer spacing for the finite-difference reference
    fine = evolution.Grid1D(-30.0, 30.0, 4096)
    psi = fine.sample(lambda x: np.exp(-(x**2) / 8 + 1j * k0 * x))
    params = evolution.SchrodingerParams(tau, b)
    _, x_spectral, _ = evolution.observables(evolution.schrodinger_evolve(psi, params))
    reference = evolution.crank_nicolson_evolve(psi, b, tau, steps=2000)
    _, x_cn, _ = evolution.observables(reference)
    yield _check(
        Suite.EVOLUTION, "<x> against Crank-Nicolson", abs(x_spectral - x_cn), 1e-4
    )
    psi = grid.sample(lambda x: np.exp(-(x**2) / 8 + 1j * k0 * x))
    quartic = evolution.SchrodingerParams(0.5, 2.0)
    out = evolution.schrodinger_evolve_general(psi, quartic, 2)
    _, _, k2 = evolution.observables(out)
    yield _check(Suite.EVOLUTION, "p=2 momentum law", abs(k2 - (k0 - 1.0)), 1e-4)


def _evolution_watson_j(cfg: QuadratureConfig) -> Iterator[CheckResult]:
    grid = evolution.Grid1D(-6.0, 6.0, 128)
    w = evolution.sample_watson(grid, cfg)
    j = evolution.watson_j(grid, cfg, windowed=w)
    error = abs(j.norm() - w.norm()) / w.norm()
    yield _check(Suite.EVOLUTION, "J transform keeps the norm", error, 1e-10)
    inner = j.interior()
    scale = float(np.max(np.abs(j.values[inner])))
    residual = float(np.max(np.abs(evolution.j_ode_residual(j)[inner]))) / scale
    yield CheckResult(
        Suite.EVOLUTION,
        "x^2 J + i(xJ' + J/2) = 0 for sampled W",
        residual <= 1e-3,
        f"relative residual {residual:.3g} on the interior",
        reported=True,
    )
    exact = evolution.Grid1D(1.0, 5.0, 4096)
    x = exact.nodes
    analytic = evolution.GridFunction(exact, x**-0.5 * np.exp(0.5j * x**2))
    inner = analytic.interior()
    error = float(np.max(np.abs(evolution.j_ode_residual(analytic)[inner])))
    yield _check(Suite.EVOLUTION, "J equation on x^(-1/2) e^(ix^2/2)", error, 1e-3)


SUITES: dict[Suite, tuple[Check, ...]] = {
    Suite.HERMITE: (_hermite_identities, _hermite_reductions),
    Suite.AIRY: (
        _airy_values,
        _airy_scaling,
        _airy_odes,
        _airy_generalized,
        _watson,
    ),
    Suite.TRANSFORMS: (
        _transform_monomials,
        _transform_linearity,
        _transform_hermite,
        _transform_identities,
    ),
    Suite.EVOLUTION: (
        _evolution_unitarity,
        _evolution_paths,
        _evolution_ehrenfest,
        _evolution_watson_j,
    ),
}


def run_suite(suite: Suite, cfg: QuadratureConfig) -> list[CheckResult]:
    selected = list(SUITES) if suite == Suite.ALL else [suite]
    results: list[CheckResult] = []
    for name in selected:
        for check in SUITES[name]:
            try:
                results.extend(check(cfg))
            except AirykitError as exc:
                logger.warning("check %s raised: %s", check.__name__, exc)
                results.append(
                    CheckResult(name, check.__name__.strip("_"), False, str(exc))
                )
    return results


def all_passed(results: list[CheckResult]) -> bool:
    return all(r.passed for r in results if r.counts)


def format_table(results: list[CheckResult]) -> str:
    width = max((len(r.name) for r in results), default=10)
    lines = [f"{'suite':<11} {'check':<{width}}  status    detail"]
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        if r.reported:
            status += "*"
        lines.append(f"{r.suite.value:<11} {r.name:<{width}}  {status:<8}  {r.detail}")
    if any(r.reported for r in results):
        lines.append("* reported only, not counted")
    return "\n".join(lines)
