"""Ring-based phase estimation, the textbook register oracle, and sampling.

The ring pipeline localizes a particle at phi = 0, evolves it for the return
time, and reads the angle of the density peak, which lands at
wrap(-2 q Phi / hbar).  The register oracle implements the standard t-qubit
algorithm whose measurement distribution is

    Pr(k) = | 2^-t sum_j exp(i (phi_u - 2 pi k / 2^t) j) |^2

with phi_u in [-pi, pi); both pipelines report on a common phase axis so they
can be cross-validated.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (TWO_PI, AngleGrid, PhaseEstimate, RingConfig, WaveState,
                   density_on_grid, wrap_angle)
from .abelian import evolve, localized_state, return_time, shift_angle


@dataclass(frozen=True)
class RegisterQpeSpec:
    """A t-qubit register and the eigenphase phi_u to be estimated.

    phi_u follows the [-pi, pi) convention; the conversion to the usual
    "fraction of 2 pi" register convention is internal.  t is capped at 20
    to keep the distribution brute-force tractable.
    """

    t_qubits: int
    phase: float

    def __post_init__(self):
        if not 1 <= self.t_qubits <= 20:
            raise ValueError("t_qubits must be in [1, 20]")
        if not math.isfinite(self.phase):
            raise ValueError("phase must be finite")
        object.__setattr__(self, "phase", wrap_angle(self.phase))


@dataclass(frozen=True)
class MeasurementSample:
    """Positions drawn from a state's angular density; reproducible per seed."""

    angles: np.ndarray
    seed: int


def register_qpe_distribution(spec: RegisterQpeSpec) -> np.ndarray:
    """Measurement distribution Pr(k) of the t-qubit register algorithm.

    Computed as the DFT of the uniform-superposition phase vector
    exp(i phi_u j) / 2^t, which is the direct double sum evaluated exactly;
    Parseval then guarantees normalization to machine precision.
    """
    n = 1 << spec.t_qubits
    j = np.arange(n)
    register = np.exp(1j * spec.phase * j) / n
    amplitudes = np.fft.fft(register)
    return np.abs(amplitudes) ** 2


def register_phase_axis(t_qubits: int) -> np.ndarray:
    """Phases wrap(2 pi k / 2^t) assigned to register outcomes k."""
    n = 1 << t_qubits
    return wrap_angle(TWO_PI * np.arange(n) / n)


def estimate_from_density(grid: AngleGrid, density: np.ndarray) -> PhaseEstimate:
    """Locate the density peak and refine it to sub-bin resolution.

    The discrete argmax (ties toward the smallest index) is refined by a
    3-point parabola through the log-density; the half width is the distance
    from the peak to the first local minimum of the density.
    """
    if len(density) != grid.size:
        raise ValueError("density length does not match grid size")
    if np.min(density) < 0.0:
        raise ValueError("density entries must be non-negative")
    total = float(np.sum(density))
    if not total > 0.0:
        raise ValueError("degenerate (all-zero) density")
    g = grid.size
    peak = int(np.argmax(density))
    logd = np.log(np.maximum(density, 1e-300))
    left, center, right = logd[(peak - 1) % g], logd[peak], logd[(peak + 1) % g]
    curvature = left - 2.0 * center + right
    if curvature < 0.0:
        offset = 0.5 * (left - right) / curvature
        offset = min(0.5, max(-0.5, offset))
    else:
        offset = 0.0
    refined = wrap_angle(grid.points[peak] + offset * grid.spacing)

    def bins_to_local_min(direction: int) -> int:
        for k in range(1, g):
            here = density[(peak + direction * k) % g]
            prev = density[(peak + direction * (k - 1)) % g]
            if here > prev:
                return k - 1
        return g // 2

    half_width = min(bins_to_local_min(+1), bins_to_local_min(-1)) * grid.spacing
    distribution = density / (total * grid.spacing)
    return PhaseEstimate(phase=refined, grid_peak=peak, refined_peak=refined,
                         half_width=half_width, distribution=distribution)


def ring_qpe(config: RingConfig, cutoff: int, grid: AngleGrid) -> PhaseEstimate:
    """Run the ring pipeline: localize, evolve for t_R, measure the angle.

    The estimate targets wrap(-2 q Phi / hbar); because the readout is an
    angle, fluxes whose shift differs by 2 pi (Phi -> Phi + pi hbar / q in
    natural units) are indistinguishable.
    """
    if grid.size < 4 * cutoff + 4:
        raise ValueError(
            f"grid size {grid.size} too coarse for l={cutoff}; need G >= {4*cutoff+4}"
        )
    state = localized_state(cutoff)
    evolved = evolve(state, config, return_time(config)).state
    return estimate_from_density(grid, density_on_grid(evolved, grid))


def flux_from_phase(config: RingConfig, phase: float) -> float:
    """Principal flux Phi = -hbar * phase / (2 q) consistent with a phase.

    The full solution family is Phi + k * pi hbar / q for integer k: shifts
    differing by 2 pi produce the same measured angle, so only the principal
    value is recoverable.
    """
    if config.charge == 0.0:
        raise ValueError("flux_from_phase requires a nonzero charge")
    return -config.hbar * phase / (2.0 * config.charge)


def sample_positions(state: WaveState, grid: AngleGrid, n: int, seed: int) -> MeasurementSample:
    """Draw n positions from the bin-discretized density by inverse CDF.

    Bin i carries probability density(phi_i) * (2 pi / G) (renormalized);
    the draw returns the grid angle of the sampled bin.  Deterministic for a
    given seed.
    """
    if n < 1:
        raise ValueError("sample count must be >= 1")
    density = density_on_grid(state, grid)
    mass = density * grid.spacing
    total = float(mass.sum())
    if not total > 0.0:
        raise ValueError("degenerate (all-zero) density")
    cdf = np.cumsum(mass / total)
    cdf[-1] = 1.0
    rng = np.random.default_rng(seed)
    indices = np.searchsorted(cdf, rng.random(n), side="right")
    return MeasurementSample(angles=grid.points[indices], seed=seed)


@dataclass(frozen=True)
class ComparisonReport:
    """Ring vs register peak locations on a common phase axis."""

    ring_phase: float
    register_phase: float
    register_peak: int
    phi_u: float
    difference: float
    bound: float

    @property
    def within_bound(self) -> bool:
        return self.difference <= self.bound


def compare_ring_vs_register(config: RingConfig, cutoff: int, t_qubits: int,
                             grid: AngleGrid) -> ComparisonReport:
    """Run both pipelines for the same flux and compare their peaks.

    The register oracle gets phi_u = wrap(shift_angle(config)); the two peak
    phases must agree within max(2 pi / 2^t, 2 pi / G).
    """
    ring = ring_qpe(config, cutoff, grid)
    phi_u = wrap_angle(shift_angle(config))
    distribution = register_qpe_distribution(RegisterQpeSpec(t_qubits, phi_u))
    register_peak = int(np.argmax(distribution))
    register_phase = float(register_phase_axis(t_qubits)[register_peak])
    difference = abs(wrap_angle(ring.phase - register_phase))
    bound = max(TWO_PI / (1 << t_qubits), TWO_PI / grid.size)
    return ComparisonReport(ring_phase=ring.phase, register_phase=register_phase,
                            register_peak=register_peak, phi_u=phi_u,
                            difference=difference, bound=bound)
