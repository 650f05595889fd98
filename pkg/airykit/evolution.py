"""Spectral evolution on periodic 1-D grids.

Operators exp(y·∂^m) are Fourier multipliers exp(y·(ik)^m) on the discrete
frequency lattice of the grid. Inputs must vanish near both ends of the
interval so that periodic wrap-around does not leak into the result.
"""

from __future__ import annotations

import io
import logging
import math
import re
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
from scipy import fft, signal, sparse
from scipy.sparse import linalg as sparse_linalg

from .airy_fn import DEFAULT_CONFIG, airy_antiderivative, airy_kernel, watson_w
from .config import QuadratureConfig
from .errors import DomainError, StabilityError, ZeroNorm
from .helpers import check_finite, check_positive, is_power_of_two
from .typedefs import ComplexArray, FloatArray

logger = logging.getLogger(__name__)

SUPPORT_TOL = 1e-12
# each end band holds this share of the nodes
SUPPORT_BAND = 0.05
WATSON_TAPER = 0.1

_HEADER_RE = re.compile(
    r"^#\s*grid\s+x_min=(?P<x_min>\S+)\s+x_max=(?P<x_max>\S+)\s+n=(?P<n>\d+)\s*$"
)


@dataclass(frozen=True)
class Grid1D:
    """Periodic grid x_j = x_min + j·dx, j = 0..n-1, dx = (x_max - x_min)/n."""

    x_min: float
    x_max: float
    n_points: int

    def __post_init__(self) -> None:
        check_finite("x_min", self.x_min)
        check_finite("x_max", self.x_max)
        if not self.x_max > self.x_min:
            raise DomainError(
                f"x_max must exceed x_min, got [{self.x_min}, {self.x_max}]"
            )
        if self.n_points < 64 or not is_power_of_two(self.n_points):
            raise DomainError(
                f"n_points must be a power of two >= 64, got {self.n_points}"
            )

    @property
    def length(self) -> float:
        return self.x_max - self.x_min

    @property
    def spacing(self) -> float:
        return self.length / self.n_points

    @property
    def nodes(self) -> FloatArray:
        return self.x_min + self.spacing * np.arange(self.n_points)

    @property
    def wavenumbers(self) -> FloatArray:
        return 2 * np.pi * fft.fftfreq(self.n_points, d=self.spacing)

    def refined(self) -> Grid1D:
        return Grid1D(self.x_min, self.x_max, 2 * self.n_points)

    def sample(self, f: Callable[[FloatArray], np.ndarray]) -> GridFunction:
        return GridFunction(self, np.asarray(f(self.nodes), dtype=complex))


@dataclass(frozen=True, eq=False)
class GridFunction:
    grid: Grid1D
    values: ComplexArray

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=complex)
        if values.shape != (self.grid.n_points,):
            raise DomainError(
                f"expected {self.grid.n_points} samples, got shape {values.shape}"
            )
        if not np.all(np.isfinite(values)):
            raise DomainError("grid function samples must be finite")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def with_values(self, values: np.ndarray) -> GridFunction:
        return GridFunction(self.grid, values)

    def norm(self) -> float:
        return math.sqrt(self.grid.spacing * float(np.sum(np.abs(self.values) ** 2)))

    def band_size(self) -> int:
        return max(1, int(self.grid.n_points * SUPPORT_BAND))

    def is_effectively_supported(self, tol: float = SUPPORT_TOL) -> bool:
        band = self.band_size()
        edges = np.concatenate((self.values[:band], self.values[-band:]))
        return bool(np.all(np.abs(edges) < tol))

    def require_support(self, tol: float = SUPPORT_TOL) -> None:
        if not self.is_effectively_supported(tol):
            raise DomainError(
                "input is not effectively supported: |f| must stay below "
                f"{tol:g} on the first and last {self.band_size()} nodes"
            )

    def interior(self, share: float = 0.6) -> slice:
        n = self.grid.n_points
        skip = int(n * (1 - share) / 2)
        return slice(skip, n - skip)

    def to_csv(self, precision: int = 12) -> str:
        g = self.grid
        out = io.StringIO()
        out.write(f"# grid x_min={g.x_min!r} x_max={g.x_max!r} n={g.n_points}\n")
        out.write("x,re,im\n")
        for x, v in zip(g.nodes, self.values):
            cells = (x, v.real, v.imag)
            out.write(",".join(f"{c:.{precision}g}" for c in cells) + "\n")
        return out.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> GridFunction:
        lines = [line.strip() for line in text.splitlines() if line.strip()]
        if not lines:
            raise DomainError("empty grid function file")
        match = _HEADER_RE.match(lines[0])
        if match is None:
            raise DomainError(
                "first line must be '# grid x_min=... x_max=... n=...'"
            )
        grid = Grid1D(
            float(match["x_min"]), float(match["x_max"]), int(match["n"])
        )
        rows = lines[1:]
        if rows and rows[0].replace(" ", "") == "x,re,im":
            rows = rows[1:]
        try:
            data = np.array([[float(v) for v in row.split(",")] for row in rows])
        except ValueError as exc:
            raise DomainError(f"malformed grid function row: {exc}") from exc
        if data.shape != (grid.n_points, 3):
            raise DomainError(
                f"expected {grid.n_points} rows of x,re,im, got {data.shape}"
            )
        if not np.allclose(data[:, 0], grid.nodes, rtol=0, atol=1e-9 * grid.length):
            raise DomainError("x column does not match the grid header")
        return cls(grid, data[:, 1] + 1j * data[:, 2])


@dataclass(frozen=True)
class SpectralPropagator:
    """exp(y·∂^m) as the Fourier multiplier exp(y·(ik)^m)."""

    m: int
    y: float

    def __post_init__(self) -> None:
        if not isinstance(self.m, int) or self.m < 2:
            raise DomainError(f"order m must be an integer >= 2, got {self.m!r}")
        check_finite("y", self.y)

    @property
    def is_unitary(self) -> bool:
        return self.m % 2 == 1

    @property
    def amplifies(self) -> bool:
        # even m: (ik)^m = (-1)^(m/2) k^m
        return not self.is_unitary and self.y * (-1) ** (self.m // 2) > 0

    def multiplier(self, grid: Grid1D) -> ComplexArray:
        k = grid.wavenumbers
        if self.is_unitary:
            # (ik)^m = i^m k^m with |i^m| = 1; keep it exactly unimodular
            phase = self.y * k**self.m * (-1) ** ((self.m - 1) // 2)
            return np.exp(1j * phase)
        return np.exp(self.y * (-1) ** (self.m // 2) * k**self.m).astype(complex)

    def compose(self, other: SpectralPropagator) -> SpectralPropagator:
        if other.m != self.m:
            raise DomainError("only propagators of the same order compose")
        return SpectralPropagator(self.m, self.y + other.y)


def apply_multiplier(f: GridFunction, multiplier: ComplexArray) -> GridFunction:
    return f.with_values(fft.ifft(multiplier * fft.fft(f.values)))


def propagate(prop: SpectralPropagator, f: GridFunction) -> GridFunction:
    f.require_support()
    if prop.amplifies:
        raise StabilityError(
            f"exp(y d^{prop.m}/dx^{prop.m}) with y={prop.y} amplifies high "
            "frequencies (backward diffusion)"
        )
    return apply_multiplier(f, prop.multiplier(f.grid))


def airy_kernel_samples(grid: Grid1D, y: float) -> FloatArray:
    """Ai(d, y) = (3y)^(-1/3)·Ai(d/(3y)^(1/3)) at offsets d = j·dx, |j| < n.

    When the kernel scale is below eight grid spacings the samples are cell
    averages, which keeps the discrete kernel summing to one.
    """
    n, dx = grid.n_points, grid.spacing
    c = (3 * y) ** (1 / 3)
    d = dx * np.arange(-(n - 1), n)
    if c >= 8 * dx:
        return np.asarray(airy_kernel(d / c)) / c
    upper = airy_antiderivative((d + dx / 2) / c)
    lower = airy_antiderivative((d - dx / 2) / c)
    return (upper - lower) / dx


def airy_pde_solve(g: GridFunction, y: float) -> GridFunction:
    """F(x, y) = ∫Ai(x − ξ, y)g(ξ)dξ, solving ∂_yF = −∂_x³F with F(x, 0) = g.

    Computed as a linear (non-periodic) convolution on the grid.
    """
    if not y > 0:
        raise DomainError(f"y must be positive, got {y!r}")
    g.require_support()
    n = g.grid.n_points
    kernel = airy_kernel_samples(g.grid, y)
    full = signal.fftconvolve(g.values, kernel)
    return g.with_values(full[n - 1 : 2 * n - 1] * g.grid.spacing)


@dataclass(frozen=True)
class SchrodingerParams:
    """Scaled parameters of iΨ_τ = −Ψ_xx + b·x·Ψ.

    τ carries units of length² and b of length⁻³.
    """

    tau: float
    b: float

    def __post_init__(self) -> None:
        check_finite("tau", self.tau)
        check_finite("b", self.b)

    @classmethod
    def from_physical(
        cls, *, hbar: float, mass: float, force: float, time: float
    ) -> SchrodingerParams:
        check_positive("hbar", hbar)
        check_positive("mass", mass)
        return cls(tau=hbar * time / (2 * mass), b=2 * force * mass / hbar**2)

    def physical_time(self, *, hbar: float, mass: float) -> float:
        check_positive("hbar", hbar)
        check_positive("mass", mass)
        return 2 * mass * self.tau / hbar

    def physical_force(self, *, hbar: float, mass: float) -> float:
        check_positive("hbar", hbar)
        check_positive("mass", mass)
        return self.b * hbar**2 / (2 * mass)


def schrodinger_evolve_general(
    psi: GridFunction, params: SchrodingerParams, p: int = 1
) -> GridFunction:
    """exp(−a∂^q)·exp(−ibxτ)·exp(a∂^q)ψ with q = 2p+1 and a = 1/(q·b).

    Solves iΨ_τ = −∂^{2p}Ψ + bxΨ in a single step.
    """
    if not isinstance(p, int) or p < 1:
        raise DomainError(f"p must be an integer >= 1, got {p!r}")
    if params.b == 0:
        raise DomainError("b = 0 has no factorized propagator; use the free one")
    psi.require_support()
    q = 2 * p + 1
    a = 1 / (q * params.b)
    grid = psi.grid
    outgoing = SpectralPropagator(q, a).multiplier(grid)
    phase = np.exp(-1j * params.b * params.tau * grid.nodes)
    values = fft.ifft(outgoing * fft.fft(psi.values))
    values = fft.ifft(np.conj(outgoing) * fft.fft(phase * values))
    return psi.with_values(values)


def schrodinger_evolve(psi: GridFunction, params: SchrodingerParams) -> GridFunction:
    return schrodinger_evolve_general(psi, params, 1)


def spectral_derivative(f: GridFunction, order: int = 1) -> GridFunction:
    k = f.grid.wavenumbers
    return apply_multiplier(f, (1j * k) ** order)


def schrodinger_residual(
    psi: GridFunction, params: SchrodingerParams, dtau: float, p: int = 1
) -> float:
    """‖iD_τΨ + ∂^{2p}Ψ − bxΨ‖ at params.tau, with a centered τ-difference."""
    check_positive("dtau", dtau)
    before = schrodinger_evolve_general(
        psi, SchrodingerParams(params.tau - dtau, params.b), p
    )
    after = schrodinger_evolve_general(
        psi, SchrodingerParams(params.tau + dtau, params.b), p
    )
    now = schrodinger_evolve_general(psi, params, p)
    d_tau = (after.values - before.values) / (2 * dtau)
    kinetic = spectral_derivative(now, 2 * p).values
    residual = 1j * d_tau + kinetic - params.b * psi.grid.nodes * now.values
    return psi.with_values(residual).norm()


def _periodic_second_difference(grid: Grid1D) -> sparse.csc_matrix:
    n, dx = grid.n_points, grid.spacing
    main = -2 * np.ones(n)
    off = np.ones(n - 1)
    d2 = sparse.diags([off, main, off], [-1, 0, 1], format="lil")
    d2[0, n - 1] = 1
    d2[n - 1, 0] = 1
    return d2.tocsc() / dx**2


def crank_nicolson_evolve(
    psi: GridFunction,
    b: float,
    tau: float,
    p: int = 1,
    *,
    steps: int = 2000,
) -> GridFunction:
    """Small-step Crank–Nicolson solution of iΨ_τ = −∂^{2p}Ψ + bxΨ.

    Finite differences in x (∂^{2p} as the p-th power of the periodic
    second difference); used as an independent check of the spectral
    pipeline.
    """
    if steps < 1:
        raise DomainError(f"steps must be >= 1, got {steps}")
    grid = psi.grid
    d2 = _periodic_second_difference(grid)
    kinetic = d2
    for _ in range(p - 1):
        kinetic = kinetic @ d2
    hamiltonian = -kinetic + sparse.diags(b * grid.nodes)
    dt = tau / steps
    eye = sparse.identity(grid.n_points, format="csc")
    lhs = (eye + 0.5j * dt * hamiltonian).tocsc()
    rhs = (eye - 0.5j * dt * hamiltonian).tocsc()
    solver = sparse_linalg.splu(lhs)
    values = psi.values.copy()
    for _ in range(steps):
        values = solver.solve(rhs @ values)
    logger.debug("crank-nicolson: %d steps of %.3g", steps, dt)
    return psi.with_values(values)


def watson_taper(grid: Grid1D, share: float = WATSON_TAPER) -> FloatArray:
    """1 in the interior, raised-cosine ramps to 0 over both end bands.

    The window depends on x only, so refined grids see the same function.
    """
    x = grid.nodes
    band = share * grid.length
    window = np.ones_like(x)
    left = (x - grid.x_min) / band
    right = (grid.x_max - x) / band
    ramp_left = left < 1
    ramp_right = right < 1
    window[ramp_left] = 0.5 * (1 - np.cos(np.pi * left[ramp_left]))
    window[ramp_right] = 0.5 * (1 - np.cos(np.pi * right[ramp_right]))
    return window


def sample_watson(
    grid: Grid1D, cfg: QuadratureConfig = DEFAULT_CONFIG
) -> GridFunction:
    values = np.array([watson_w(float(x), cfg).value for x in grid.nodes])
    return GridFunction(grid, values * watson_taper(grid))


def watson_j(
    grid: Grid1D,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
    *,
    windowed: GridFunction | None = None,
) -> GridFunction:
    """J = exp((i/4)∂²)W, the multiplier being exp(−ik²/4)."""
    w = sample_watson(grid, cfg) if windowed is None else windowed
    return apply_multiplier(w, np.exp(-0.25j * grid.wavenumbers**2))


def j_ode_residual(j: GridFunction) -> ComplexArray:
    """x²J + i(x·J′ + J/2) with J′ from centered differences."""
    x = j.grid.nodes
    dj = np.gradient(j.values, j.grid.spacing)
    return x**2 * j.values + 1j * (x * dj + j.values / 2)


def observables(psi: GridFunction) -> tuple[float, float, float]:
    """(‖ψ‖, ⟨x⟩, ⟨k⟩); ⟨k⟩ comes from the discrete spectrum."""
    norm = psi.norm()
    if norm < 1e-14:
        raise ZeroNorm(f"norm {norm:.3g} is too small for expectation values")
    density = np.abs(psi.values) ** 2
    mean_x = psi.grid.spacing * float(np.sum(psi.grid.nodes * density)) / norm**2
    spectrum = np.abs(fft.fft(psi.values)) ** 2
    mean_k = float(np.sum(psi.grid.wavenumbers * spectrum) / np.sum(spectrum))
    return norm, mean_x, mean_k
