import math

import numpy as np
import pytest

from airykit.airy_fn import airy_antiderivative
from airykit.errors import DomainError, StabilityError, ZeroNorm
from airykit.evolution import (
    Grid1D,
    GridFunction,
    SchrodingerParams,
    SpectralPropagator,
    airy_kernel_samples,
    airy_pde_solve,
    crank_nicolson_evolve,
    j_ode_residual,
    observables,
    propagate,
    sample_watson,
    schrodinger_evolve,
    schrodinger_evolve_general,
    schrodinger_residual,
    spectral_derivative,
    watson_j,
    watson_taper,
)
from airykit.integrand import gaussian
from airykit.transforms import airy_transform

WIDE = Grid1D(-60.0, 60.0, 2048)


def packet(
    grid: Grid1D, center: float = 0.0, width: float = 2.0, k0: float = 0.0
) -> GridFunction:
    return grid.sample(lambda x: np.exp(-(((x - center) / width) ** 2) + 1j * k0 * x))


class TestGrid1D:
    def test_nodes(self) -> None:
        grid = Grid1D(-1.0, 1.0, 64)
        assert grid.spacing == pytest.approx(2 / 64)
        assert grid.nodes[0] == -1.0
        assert grid.nodes[-1] == pytest.approx(1 - 2 / 64)
        assert grid.wavenumbers[1] == pytest.approx(math.pi)
        assert grid.refined().n_points == 128

    @pytest.mark.parametrize(
        "args", [(1.0, -1.0, 64), (0.0, 1.0, 100), (0.0, 1.0, 32), (0.0, math.inf, 64)]
    )
    def test_invalid(self, args: tuple[float, float, int]) -> None:
        with pytest.raises(DomainError):
            Grid1D(*args)


class TestGridFunction:
    def test_values_are_read_only_copy(self) -> None:
        grid = Grid1D(-1.0, 1.0, 64)
        raw = np.zeros(64)
        f = GridFunction(grid, raw)
        raw[0] = 1.0
        assert f.values[0] == 0
        with pytest.raises(ValueError):
            f.values[0] = 1.0

    def test_invalid(self) -> None:
        grid = Grid1D(-1.0, 1.0, 64)
        with pytest.raises(DomainError, match="expected 64 samples"):
            GridFunction(grid, np.zeros(63))
        values = np.zeros(64)
        values[3] = math.nan
        with pytest.raises(DomainError, match="finite"):
            GridFunction(grid, values)

    def test_norm(self) -> None:
        f = packet(WIDE, width=1.0)
        assert f.norm() == pytest.approx(math.sqrt(math.sqrt(math.pi / 2)), rel=1e-12)

    def test_support(self) -> None:
        assert packet(WIDE).is_effectively_supported()
        wide = WIDE.sample(lambda x: np.exp(-((x / 40) ** 2)))
        assert not wide.is_effectively_supported()
        with pytest.raises(DomainError, match="effectively supported"):
            wide.require_support()

    def test_interior(self) -> None:
        f = packet(Grid1D(-1.0, 1.0, 64))
        inner = f.interior()
        assert (inner.start, inner.stop) == (12, 52)

    def test_csv(self) -> None:
        grid = Grid1D(-4.0, 4.0, 64)
        f = packet(grid, width=0.7, k0=1.5)
        text = f.to_csv(precision=17)
        lines = text.splitlines()
        assert lines[0] == "# grid x_min=-4.0 x_max=4.0 n=64"
        assert lines[1] == "x,re,im"
        assert len(lines) == 66
        back = GridFunction.from_csv(text)
        assert back.grid == grid
        assert np.array_equal(back.values, f.values)

    @pytest.mark.parametrize(
        "text, message",
        [
            ("", "empty"),
            ("x,re,im\n0,1,0\n", "first line"),
            ("# grid x_min=0 x_max=1 n=64\nx,re,im\n0,1,0\n", "expected 64 rows"),
            ("# grid x_min=0 x_max=1 n=64\n0,a,0\n", "malformed"),
        ],
    )
    def test_csv_errors(self, text: str, message: str) -> None:
        with pytest.raises(DomainError, match=message):
            GridFunction.from_csv(text)

    def test_csv_x_mismatch(self) -> None:
        grid = Grid1D(0.0, 1.0, 64)
        text = grid.sample(np.cos).to_csv().replace(
            "# grid x_min=0.0", "# grid x_min=0.5"
        )
        with pytest.raises(DomainError):
            GridFunction.from_csv(text)


class TestSpectralPropagator:
    def test_flags(self) -> None:
        assert SpectralPropagator(3, -1.0).is_unitary
        assert not SpectralPropagator(3, -1.0).amplifies
        assert SpectralPropagator(2, -1.0).amplifies
        assert not SpectralPropagator(2, 1.0).amplifies
        assert SpectralPropagator(4, 1.0).amplifies
        assert not SpectralPropagator(4, -1.0).amplifies

    @pytest.mark.parametrize("m", [3, 5, 7])
    def test_odd_multiplier_is_unimodular(self, m: int) -> None:
        mult = SpectralPropagator(m, 0.7).multiplier(WIDE)
        assert np.abs(mult) == pytest.approx(np.ones(WIDE.n_points), abs=1e-15)

    def test_multiplier_matches_symbol(self) -> None:
        grid = Grid1D(-10.0, 10.0, 128)
        k = grid.wavenumbers
        for m, y in ((3, 0.4), (2, 0.4), (4, -0.1), (5, -0.05)):
            mult = SpectralPropagator(m, y).multiplier(grid)
            assert mult == pytest.approx(np.exp(y * (1j * k) ** m), abs=1e-9)

    def test_compose(self) -> None:
        prop = SpectralPropagator(3, 0.1).compose(SpectralPropagator(3, 0.2))
        assert prop.m == 3
        assert prop.y == pytest.approx(0.3)
        with pytest.raises(DomainError):
            SpectralPropagator(3, 0.1).compose(SpectralPropagator(5, 0.1))

    def test_invalid(self) -> None:
        with pytest.raises(DomainError):
            SpectralPropagator(1, 0.1)
        with pytest.raises(DomainError):
            SpectralPropagator(3, math.nan)


class TestPropagate:
    @pytest.mark.parametrize("m", [3, 5])
    def test_unitary(self, m: int) -> None:
        f = packet(WIDE, center=3.0, k0=1.0)
        out = propagate(SpectralPropagator(m, 0.3), f)
        assert out.norm() == pytest.approx(f.norm(), rel=1e-12)

    def test_semigroup(self) -> None:
        f = packet(WIDE)
        once = propagate(SpectralPropagator(3, 0.1), f)
        twice = propagate(
            SpectralPropagator(3, 0.04), propagate(SpectralPropagator(3, 0.06), f)
        )
        assert np.max(np.abs(once.values - twice.values)) < 1e-12

    def test_heat_equation(self) -> None:
        f = packet(WIDE, width=1.0)
        y = 0.5
        out = propagate(SpectralPropagator(2, y), f)
        exact = np.exp(-(WIDE.nodes**2) / (1 + 4 * y)) / math.sqrt(1 + 4 * y)
        assert np.max(np.abs(out.values - exact)) < 1e-10

    def test_backward_diffusion(self) -> None:
        with pytest.raises(StabilityError):
            propagate(SpectralPropagator(2, -1.0), packet(WIDE))

    def test_requires_support(self) -> None:
        with pytest.raises(DomainError):
            propagate(SpectralPropagator(3, 0.1), WIDE.sample(np.ones_like))

    @pytest.mark.parametrize("y", [0.25, 1.0])
    def test_matches_quadrature(self, y: float) -> None:
        out = propagate(SpectralPropagator(3, y), packet(WIDE))
        for j in (900, 1024, 1100, 1300):
            exact = airy_transform(gaussian(2.0), float(WIDE.nodes[j]), y)
            assert abs(out.values[j] - exact) < 1e-5

    def test_spectral_derivative(self) -> None:
        f = packet(WIDE, width=1.0)
        d = spectral_derivative(f)
        expected = -2 * WIDE.nodes * np.exp(-(WIDE.nodes**2))
        assert np.max(np.abs(d.values - expected)) < 1e-10


class TestAiryPde:
    def test_kernel_cell_averages_telescope(self) -> None:
        grid = Grid1D(-10.0, 10.0, 64)
        y = 0.001
        c = (3 * y) ** (1 / 3)
        samples = airy_kernel_samples(grid, y)
        assert len(samples) == 2 * grid.n_points - 1
        half = (grid.n_points - 0.5) * grid.spacing / c
        total = float(airy_antiderivative(half) - airy_antiderivative(-half))
        assert samples.sum() * grid.spacing == pytest.approx(total, abs=1e-12)

    @pytest.mark.parametrize("y", [0.25, 1.0])
    def test_matches_backward_propagator(self, y: float) -> None:
        g = packet(WIDE)
        pde = airy_pde_solve(g, y)
        spectral = propagate(SpectralPropagator(3, -y), g)
        inner = g.interior()
        assert np.max(np.abs(pde.values[inner] - spectral.values[inner])) < 1e-5

    def test_cell_averaged_kernel(self) -> None:
        g = packet(WIDE)
        y = 0.01
        pde = airy_pde_solve(g, y)
        spectral = propagate(SpectralPropagator(3, -y), g)
        inner = g.interior()
        assert np.max(np.abs(pde.values[inner] - spectral.values[inner])) < 1e-3

    def test_translation(self) -> None:
        g = packet(WIDE)
        once = airy_pde_solve(g, 1.0)
        twice = airy_pde_solve(airy_pde_solve(g, 0.4), 0.6)
        inner = g.interior()
        assert np.max(np.abs(once.values[inner] - twice.values[inner])) < 1e-5

    def test_invalid(self) -> None:
        with pytest.raises(DomainError):
            airy_pde_solve(packet(WIDE), 0.0)


class TestSchrodinger:
    def test_identity_at_zero_time(self) -> None:
        psi = packet(WIDE, k0=0.5)
        out = schrodinger_evolve(psi, SchrodingerParams(0.0, 1.0))
        assert np.max(np.abs(out.values - psi.values)) < 1e-12

    @pytest.mark.parametrize("p", [1, 2])
    def test_unitary(self, p: int) -> None:
        rng = np.random.default_rng(3)
        for _ in range(5):
            psi = packet(
                WIDE, rng.uniform(-10, 10), rng.uniform(1, 3), rng.uniform(-2, 2)
            )
            out = schrodinger_evolve_general(psi, SchrodingerParams(0.5, 1.0), p)
            assert out.norm() == pytest.approx(psi.norm(), rel=1e-12)

    def test_general_p1_is_schrodinger_evolve(self) -> None:
        psi = packet(WIDE, k0=0.5)
        params = SchrodingerParams(0.7, 1.3)
        assert np.array_equal(
            schrodinger_evolve_general(psi, params, 1).values,
            schrodinger_evolve(psi, params).values,
        )

    def test_ehrenfest(self) -> None:
        k0, b, tau = 0.5, 1.0, 1.5
        psi = WIDE.sample(lambda x: np.exp(-(x**2) / 8 + 1j * k0 * x))
        _, x0, _ = observables(psi)
        _, x1, k1 = observables(schrodinger_evolve(psi, SchrodingerParams(tau, b)))
        assert x1 == pytest.approx(x0 + 2 * k0 * tau - b * tau**2, abs=1e-4)
        assert k1 == pytest.approx(k0 - b * tau, abs=1e-4)

    def test_ehrenfest_quartic(self) -> None:
        k0, b, tau = 0.5, 2.0, 0.5
        psi = WIDE.sample(lambda x: np.exp(-(x**2) / 8 + 1j * k0 * x))
        out = schrodinger_evolve_general(psi, SchrodingerParams(tau, b), 2)
        _, _, k1 = observables(out)
        assert k1 == pytest.approx(k0 - b * tau, abs=1e-4)

    def test_residual_is_second_order(self) -> None:
        psi = WIDE.sample(lambda x: np.exp(-(x**2) / 8 + 0.5j * x))
        params = SchrodingerParams(0.5, 1.0)
        coarse = schrodinger_residual(psi, params, 1e-2)
        fine = schrodinger_residual(psi, params, 5e-3)
        assert coarse < 1e-2 * psi.norm()
        assert 3.5 < coarse / fine < 4.5

    def test_matches_crank_nicolson(self) -> None:
        grid = Grid1D(-30.0, 30.0, 1024)
        psi = grid.sample(lambda x: np.exp(-(x**2) / 8 + 0.5j * x))
        params = SchrodingerParams(0.5, 1.0)
        spectral = schrodinger_evolve(psi, params)
        reference = crank_nicolson_evolve(psi, params.b, params.tau, steps=2000)
        diff = spectral.with_values(spectral.values - reference.values).norm()
        assert diff < 1e-2 * psi.norm()

    def test_zero_force(self) -> None:
        with pytest.raises(DomainError):
            schrodinger_evolve(packet(WIDE), SchrodingerParams(1.0, 0.0))
        with pytest.raises(DomainError):
            schrodinger_evolve_general(packet(WIDE), SchrodingerParams(1.0, 1.0), 0)

    def test_physical_units(self) -> None:
        params = SchrodingerParams.from_physical(
            hbar=2.0, mass=0.5, force=3.0, time=4.0
        )
        assert params == SchrodingerParams(tau=8.0, b=0.75)
        assert params.physical_time(hbar=2.0, mass=0.5) == pytest.approx(4.0)
        assert params.physical_force(hbar=2.0, mass=0.5) == pytest.approx(3.0)
        with pytest.raises(DomainError):
            SchrodingerParams.from_physical(hbar=0.0, mass=1.0, force=1.0, time=1.0)


class TestObservables:
    def test_centered(self) -> None:
        norm, mean_x, mean_k = observables(packet(WIDE))
        assert norm > 0
        assert mean_x == pytest.approx(0.0, abs=1e-12)
        assert mean_k == pytest.approx(0.0, abs=1e-12)

    def test_shifted(self) -> None:
        _, mean_x, mean_k = observables(packet(WIDE, center=2.5, k0=1.25))
        assert mean_x == pytest.approx(2.5, abs=1e-8)
        assert mean_k == pytest.approx(1.25, abs=1e-8)

    def test_zero_norm(self) -> None:
        with pytest.raises(ZeroNorm):
            observables(GridFunction(WIDE, np.zeros(WIDE.n_points)))


class TestWatsonJ:
    def test_taper(self) -> None:
        grid = Grid1D(-6.0, 6.0, 128)
        window = watson_taper(grid)
        assert window[0] == 0.0
        assert window[grid.n_points // 2] == 1.0
        assert np.all((window >= 0) & (window <= 1))

    def test_norm_and_refinement(self) -> None:
        grid = Grid1D(-6.0, 6.0, 128)
        w = sample_watson(grid)
        j = watson_j(grid, windowed=w)
        assert j.norm() == pytest.approx(w.norm(), rel=1e-10)
        fine = watson_j(grid.refined())
        scale = np.max(np.abs(j.values))
        drift = np.abs(np.abs(fine.values[::2]) - np.abs(j.values))
        assert np.max(drift) < 1e-2 * scale

    def test_residual_operator_on_exact_solution(self) -> None:
        grid = Grid1D(1.0, 5.0, 4096)
        x = grid.nodes
        j = GridFunction(grid, x**-0.5 * np.exp(0.5j * x**2))
        residual = j_ode_residual(j)
        inner = j.interior()
        assert np.max(np.abs(residual[inner])) < 1e-3
