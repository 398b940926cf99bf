"""Discretized path integrals for the ring and the hbar -> 0 analysis.

The interval [0, t_R] is split into N steps of length dt = t_R / N.  The
phase-space kernel inserts angular-momentum sums and position integrals
alternately; Poisson summation over each momentum sum turns it into the
configuration-space integral of exp(i A / hbar) with

    A({phi_j}) = sum_j (m r^2 / 2) (dphi_j)^2 / dt + dphi_j * q Phi / (2 pi)

over unwrapped paths.  Oscillatory sums are made absolutely convergent by a
Fresnel regulator dt -> dt - i eta applied symmetrically to both sides of
every comparison.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import TWO_PI, AngleGrid, RingConfig
from .abelian import angular_velocity, return_time, shift_angle


class CostGuardError(ValueError):
    """Raised when a brute-force evaluation would exceed desk scale."""


@dataclass(frozen=True)
class PathSpec:
    """Time slicing and quadrature parameters for a path-integral run.

    ``steps`` time steps of length t_R / N run from ``start`` (0 in the
    physical setup) to ``end``; ``momentum_cutoff`` truncates mode sums,
    ``winding_cutoff`` truncates the unwrapped covering space to
    [-(2n+1) pi, (2n+1) pi), and ``grid`` sets both the end-angle axis and
    the per-2pi quadrature density for intermediate angles.
    """

    steps: int
    end: float
    momentum_cutoff: int = 1
    grid: AngleGrid = AngleGrid(64)
    start: float = 0.0
    winding_cutoff: int = 0

    def __post_init__(self):
        if self.steps < 1:
            raise ValueError("steps must be >= 1")
        if self.momentum_cutoff < 1:
            raise ValueError("momentum_cutoff must be >= 1")
        if self.winding_cutoff < 0:
            raise ValueError("winding_cutoff must be >= 0")
        if not (math.isfinite(self.start) and math.isfinite(self.end)):
            raise ValueError("endpoints must be finite")


@dataclass(frozen=True)
class Path:
    """Unwrapped path angles phi_0 .. phi_N (may leave [-pi, pi))."""

    angles: np.ndarray

    def __post_init__(self):
        angles = np.asarray(self.angles, dtype=float)
        angles.flags.writeable = False
        object.__setattr__(self, "angles", angles)


def _check_path(path: Path, spec: PathSpec) -> np.ndarray:
    angles = path.angles
    if angles.shape != (spec.steps + 1,):
        raise ValueError(
            f"path length {angles.shape} does not match steps+1 = {spec.steps + 1}"
        )
    if abs(angles[0] - spec.start) > 1e-12 or abs(angles[-1] - spec.end) > 1e-12:
        raise ValueError("path endpoints do not match the spec")
    return angles


def action(path: Path, config: RingConfig, spec: PathSpec) -> float:
    """Configuration-space action of a discretized path.

    A = sum_j [ (m r^2 / 2) (dphi_j)^2 / dt + dphi_j q Phi / (2 pi) ]
    with dt = t_R / N; exact evaluation, quadratic in the path.  The flux
    part telescopes to a pure boundary term (end - start) q Phi / (2 pi).
    """
    angles = _check_path(path, spec)
    dt = return_time(config) / spec.steps
    dphi = np.diff(angles)
    kinetic = 0.5 * config.mass * config.radius**2 / dt * float(np.sum(dphi**2))
    flux = config.charge * config.flux / TWO_PI * float(np.sum(dphi))
    return kinetic + flux


def minimizing_path(config: RingConfig, spec: PathSpec) -> Path:
    """Constant-slope path from start to end: the quadratic-action minimizer.

    When end = shift_angle(config) the per-step increment is
    -(q Phi / 2 pi hbar)(hbar / m r^2) dt and the slope equals
    -angular_velocity(config); for other endpoints the constant-slope path
    still minimizes the action because the flux term only sees the boundary.
    """
    fractions = np.arange(spec.steps + 1) / spec.steps
    return Path(spec.start + fractions * (spec.end - spec.start))


def tent_deviation(steps: int, epsilon: float) -> np.ndarray:
    """Zero-sum increment family: +epsilon for the first half, then -epsilon."""
    if steps % 2 != 0:
        raise ValueError("tent deviation needs an even number of steps")
    return np.concatenate([np.full(steps // 2, epsilon), np.full(steps // 2, -epsilon)])


def perturbed_path(config: RingConfig, spec: PathSpec, deviations: np.ndarray) -> Path:
    """Minimizing path plus cumulative increments eps_j (sum eps_j = 0)."""
    deviations = np.asarray(deviations, dtype=float)
    if deviations.shape != (spec.steps,):
        raise ValueError(f"need {spec.steps} increment deviations")
    if abs(float(np.sum(deviations))) > 1e-12:
        raise ValueError("increment deviations must sum to zero (fixed endpoint)")
    base = minimizing_path(config, spec).angles
    offsets = np.concatenate([[0.0], np.cumsum(deviations)])
    return Path(base + offsets)


def quadratic_deviation_cost(config: RingConfig, steps: int, deviations) -> float:
    """Closed-form extra action hbar * N * sum(eps_j^2) / (8 pi)."""
    deviations = np.asarray(deviations, dtype=float)
    return config.hbar * steps * float(np.sum(deviations**2)) / (8.0 * math.pi)


def linear_term_residual(config: RingConfig, spec: PathSpec, deviations) -> float:
    """|A(min + eps) - A(min) - hbar N sum(eps^2) / 8 pi|.

    The action is exactly quadratic and the linear terms cancel for zero-sum
    deviations, so the residual is pure roundoff.
    """
    deviations = np.asarray(deviations, dtype=float)
    perturbed = perturbed_path(config, spec, deviations)
    base = minimizing_path(config, spec)
    actual = action(perturbed, config, spec) - action(base, config, spec)
    return abs(actual - quadratic_deviation_cost(config, spec.steps, deviations))


def spectral_propagator(config: RingConfig, cutoff: int, angles, t: float,
                        eta_total: float = 0.0) -> np.ndarray:
    """Exact mode-sum kernel K(phi, t) = sum_m e^{-i E_m (t - i eta)/hbar} e^{i m phi} / 2 pi.

    ``eta_total`` is the accumulated Fresnel regulator (imaginary part of the
    total time); the oracle every discretized propagator is compared against.
    """
    angles = np.asarray(angles, dtype=float)
    modes = np.arange(-cutoff, cutoff + 1)
    shifted = modes - config.flux_modes
    energy_over_hbar = config.kinetic_scale * shifted**2
    weights = np.exp(-1j * energy_over_hbar * complex(t, -eta_total))
    return np.exp(1j * np.multiply.outer(angles, modes)) @ weights / TWO_PI


def phase_space_propagator(config: RingConfig, spec: PathSpec) -> np.ndarray:
    """Kernel <phi| e^{-i H t_R / hbar} |0> from the sliced phase-space sum.

    Contracts N per-step transfer operators
    T(phi', phi) = sum_{|m|<=l} e^{-i E_m dt / hbar} e^{i m (phi' - phi)} / 2 pi
    with uniform (periodic trapezoid) quadrature over intermediate angles.
    The momentum/position insertions are exact once G > 4l, so the result
    matches the spectral propagator at the same cutoff to roundoff.

    Cost guard: N <= 6, l <= 12, G <= 256.
    """
    n, cutoff, g = spec.steps, spec.momentum_cutoff, spec.grid.size
    if n > 6 or cutoff > 12 or g > 256:
        raise CostGuardError(
            f"phase-space guard violated: need N<=6, l<=12, G<=256, got "
            f"N={n}, l={cutoff}, G={g}"
        )
    dt = return_time(config) / n
    modes = np.arange(-cutoff, cutoff + 1)
    shifted = modes - config.flux_modes
    wiggle = np.exp(-1j * config.kinetic_scale * shifted**2 * dt)
    basis = np.exp(1j * np.multiply.outer(spec.grid.points, modes))  # <phi|m> * sqrt(2pi)
    momentum = wiggle / math.sqrt(TWO_PI)  # amplitudes <m| psi> after first step
    for _ in range(n - 1):
        position = basis @ momentum / math.sqrt(TWO_PI)
        momentum = (basis.conj().T @ position) * spec.grid.spacing / math.sqrt(TWO_PI)
        momentum *= wiggle
    return basis @ momentum / math.sqrt(TWO_PI)


def poisson_lhs_terms(config: RingConfig, dt: float, dphi: float, cutoff: int,
                      eta: float) -> np.ndarray:
    """Momentum-sum terms e^{-i(hbar/2mr^2)(m-nu 2pi..)^2 (dt-i eta) + i dphi m}."""
    modes = np.arange(-cutoff, cutoff + 1)
    shifted = modes - config.flux_modes
    dt_c = complex(dt, -eta)
    return np.exp(-1j * config.kinetic_scale * shifted**2 * dt_c + 1j * dphi * modes)


def poisson_rhs_terms(config: RingConfig, dt: float, dphi: float, n_max: int,
                      eta: float) -> np.ndarray:
    """Winding-sum terms, including the exact pre-exponential factor.

    term_n = sqrt(2 pi m r^2 / (i hbar (dt - i eta)))
             * e^{ i (m r^2 / 2 hbar)(dphi + 2 pi n)^2 / (dt - i eta) }
             * e^{ i (dphi + 2 pi n) q Phi / (2 pi hbar) },

    indexed n = -n_max .. n_max.  The prefactor is what a Gaussian
    integration of the momentum sum produces; keeping it makes the Poisson
    identity an equality rather than a proportionality.
    """
    windings = np.arange(-n_max, n_max + 1)
    dt_c = complex(dt, -eta)
    excursions = dphi + TWO_PI * windings
    fresnel = np.exp(1j * excursions**2 / (4.0 * config.kinetic_scale * dt_c))
    flux_phase = np.exp(1j * excursions * config.flux_modes)
    prefactor = np.sqrt(math.pi / (1j * config.kinetic_scale * dt_c))
    return prefactor * fresnel * flux_phase


def poisson_step_check(config: RingConfig, dt: float, dphi: float, cutoff: int,
                       n_max: int, eta: float | None = None) -> tuple[complex, complex]:
    """Evaluate both sides of the per-step Poisson resummation.

    Returns (momentum_sum, winding_sum) with the shared regulator
    dt -> dt - i eta (default eta = 1e-3 dt) applied to both sides.  The two
    sides agree to the truncation error of whichever sum converges slower;
    the regulator controls the momentum side through exp(-eta m^2 ...) and
    the winding side through exp(-eta (dphi + 2 pi n)^2 / dt^2 ...).
    """
    if eta is None:
        eta = 1e-3 * dt
    if eta <= 0.0:
        raise ValueError("regulator eta must be positive")
    lhs = complex(np.sum(poisson_lhs_terms(config, dt, dphi, cutoff, eta)))
    rhs = complex(np.sum(poisson_rhs_terms(config, dt, dphi, n_max, eta)))
    return lhs, rhs


@dataclass(frozen=True)
class PropagatorFit:
    """Configuration-space kernel fitted to the spectral oracle.

    The paper-style path integral drops path-independent prefactors, so the
    comparison allows one global complex constant: ``constant`` is the
    least-squares c minimizing ||c * kernel - reference|| and ``residual``
    the relative L2 error after the fit.
    """

    kernel: np.ndarray
    reference: np.ndarray
    constant: complex
    residual: float


def config_space_propagator(config: RingConfig, spec: PathSpec,
                            eta: float | None = None) -> PropagatorFit:
    """Brute-force quadrature of exp(i A / hbar) over unwrapped paths.

    Intermediate angles run over [-(2n+1) pi, (2n+1) pi) with the grid's
    per-2pi density; end angles in [-pi, pi) collect their winding images
    phi + 2 pi w, |w| <= winding_cutoff.  The regulator dt -> dt - i eta
    (default 1e-3 dt) makes the Fresnel integrals absolutely convergent and
    is matched in the spectral reference (total imaginary time N eta).

    Cost guard: N <= 5 and at most 2048 extended quadrature nodes.
    """
    n = spec.steps
    if n > 5:
        raise CostGuardError(f"config-space guard violated: need N<=5, got N={n}")
    dt = return_time(config) / n
    if eta is None:
        eta = 1e-3 * dt
    if eta <= 0.0:
        raise ValueError("regulator eta must be positive")
    copies = 2 * spec.winding_cutoff + 1
    extended = spec.grid.size * copies
    if n >= 2 and extended > 2048:
        raise CostGuardError(
            f"config-space guard violated: {extended} extended nodes > 2048"
        )
    dt_c = complex(dt, -eta)
    quarter = 1.0 / (4.0 * config.kinetic_scale)  # m r^2 / (2 hbar)
    nu = config.flux_modes

    def step_kernel(to_pts: np.ndarray, from_pts: np.ndarray) -> np.ndarray:
        delta = to_pts[:, None] - from_pts[None, :]
        return np.exp(1j * (quarter * delta**2 / dt_c + nu * delta))

    nodes = -copies * math.pi + spec.grid.spacing * np.arange(extended)
    windings = TWO_PI * np.arange(-spec.winding_cutoff, spec.winding_cutoff + 1)
    end_points = (spec.grid.points[None, :] + windings[:, None]).ravel()

    if n == 1:
        images = step_kernel(end_points, np.array([0.0]))[:, 0]
    else:
        amplitude = step_kernel(nodes, np.array([0.0]))[:, 0]
        transfer = step_kernel(nodes, nodes)
        for _ in range(n - 2):
            amplitude = spec.grid.spacing * (transfer @ amplitude)
        images = spec.grid.spacing * (step_kernel(end_points, nodes) @ amplitude)
    kernel = images.reshape(len(windings), spec.grid.size).sum(axis=0)

    reference = spectral_propagator(config, spec.momentum_cutoff, spec.grid.points,
                                    return_time(config), eta_total=n * eta)
    denom = complex(np.vdot(kernel, kernel))
    constant = complex(np.vdot(kernel, reference)) / denom
    residual = float(np.linalg.norm(constant * kernel - reference)
                     / np.linalg.norm(reference))
    return PropagatorFit(kernel=kernel, reference=reference, constant=constant,
                         residual=residual)


@dataclass(frozen=True)
class ClassicalScanRow:
    """One hbar sample of the classical-limit scan."""

    hbar: float
    t_return: float
    delta_action_over_hbar: float
    eps_star: float
    d_star: float


@dataclass(frozen=True)
class ClassicalScanReport:
    steps: int
    epsilon: float
    rows: tuple


def classical_limit_scan(config_base: RingConfig, hbar_values, steps: int,
                         epsilon: float) -> ClassicalScanReport:
    """Track the interference threshold of the tent family as hbar shrinks.

    For each hbar: the return time t_R (growing as 1/hbar), the measured
    tent cost Delta A / hbar for the supplied epsilon (equal to
    N^2 eps^2 / 8 pi), the threshold eps* with Delta A / hbar = 1, and the
    maximal spatial deviation d* = eps* N / 2 = sqrt(8 pi)/2 of the
    threshold path.  d* is independent of hbar and N: order-one deviations
    keep contributing in the classical limit.
    """
    hbars = [float(h) for h in hbar_values]
    if not hbars:
        raise ValueError("empty hbar scan")
    if any(h <= 0.0 for h in hbars):
        raise ValueError("hbar values must be positive")
    if any(b >= a for a, b in zip(hbars, hbars[1:])):
        raise ValueError("hbar values must be strictly descending")
    rows = []
    eps_star = math.sqrt(8.0 * math.pi) / steps
    for hbar in hbars:
        cfg = RingConfig(hbar=hbar, mass=config_base.mass, radius=config_base.radius,
                         charge=config_base.charge, flux=config_base.flux)
        spec = PathSpec(steps=steps, end=shift_angle(cfg))
        base = minimizing_path(cfg, spec)
        cost = (action(perturbed_path(cfg, spec, tent_deviation(steps, epsilon)), cfg, spec)
                - action(base, cfg, spec)) / hbar
        threshold = perturbed_path(cfg, spec, tent_deviation(steps, eps_star))
        d_star = float(np.max(np.abs(threshold.angles - base.angles)))
        rows.append(ClassicalScanRow(hbar=hbar, t_return=return_time(cfg),
                                     delta_action_over_hbar=cost,
                                     eps_star=eps_star, d_star=d_star))
    return ClassicalScanReport(steps=steps, epsilon=epsilon, rows=tuple(rows))
