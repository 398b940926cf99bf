"""U(N) holonomy and spinor-valued evolution on the ring.

A constant U(N) gauge field along the ring enters through the Hermitian loop
integral Theta = (1/hbar) oint A^k X_k . dx (one winding).  Its unitary
exponential U_AB = exp(i Theta) plays the role of the estimated operator:
in the eigenbasis of Theta each internal channel b sees an effective abelian
flux with q Phi / hbar -> theta_b, so the mode-m component acquires
exp(i 2 theta_b m) over one return time (the m = 1 component winds twice,
hence the estimated unitary is W = U_AB^2).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import (TWO_PI, AngleGrid, PhaseEstimate, RingConfig, WaveState,
                   density_on_grid, wrap_angle)
from .abelian import localized_state, mode_phase_cycles, return_time
from .qpe import estimate_from_density

_HERMITICITY_RTOL = 1e-12


def generator_basis(dim: int) -> np.ndarray:
    """Hermitian basis of u(N): generalized Gell-Mann matrices plus identity.

    Returns an array of shape (N^2, N, N).  Entry (j, k) of the underlying
    double loop gives, following the standard construction, the symmetric
    pair matrix for j > k, the antisymmetric one for j < k, the diagonal
    traceless matrix for j = k < N, and the identity for j = k = N (for
    N = 2 this is exactly the three Pauli matrices plus the identity).
    All elements are Hermitian and mutually orthogonal under the trace
    inner product.
    """
    if dim < 1:
        raise ValueError("generator_basis requires N >= 1")
    mats = []
    for j in range(1, dim + 1):
        for k in range(1, dim + 1):
            elem = np.zeros((dim, dim), dtype=complex)
            if j > k:
                elem[j - 1, k - 1] = 1.0
                elem[k - 1, j - 1] = 1.0
            elif j < k:
                elem[j - 1, k - 1] = -1.0j
                elem[k - 1, j - 1] = 1.0j
            elif j < dim:
                scale = math.sqrt(2.0 / (j * (j + 1)))
                diag = np.array([1.0] * j + [-float(j)] + [0.0] * (dim - j - 1))
                elem = scale * np.diag(diag).astype(complex)
            else:
                elem = np.eye(dim, dtype=complex)
            mats.append(elem)
    return np.array(mats)


def _hermiticity_residual(matrix: np.ndarray) -> float:
    return float(np.linalg.norm(matrix - matrix.conj().T))


class GaugeField:
    """Loop-integral matrix Theta of a constant U(N) gauge field.

    Theta must be Hermitian; optionally it can be specified through real
    coefficients A^k over :func:`generator_basis`, in which case the
    reconstruction sum_k A^k X_k is stored (and, if both are given, checked
    against the explicit matrix).
    """

    __slots__ = ("dim", "theta", "coefficients")

    def __init__(self, theta, coefficients=None):
        matrix = np.array(theta, dtype=complex)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise ValueError("theta must be a square matrix")
        residual = _hermiticity_residual(matrix)
        scale = max(float(np.linalg.norm(matrix)), 1.0)
        if residual > _HERMITICITY_RTOL * scale:
            raise ValueError(
                f"theta is not Hermitian: ||theta - theta^dag|| = {residual:.3e}"
            )
        coeffs = None
        if coefficients is not None:
            coeffs = np.asarray(coefficients, dtype=float)
            if coeffs.shape != (matrix.shape[0] ** 2,):
                raise ValueError("need N^2 real generator coefficients")
            rebuilt = np.tensordot(coeffs, generator_basis(matrix.shape[0]), axes=1)
            if np.linalg.norm(rebuilt - matrix) > 1e-12 * scale:
                raise ValueError("coefficients do not reconstruct theta")
            coeffs.flags.writeable = False
        matrix.flags.writeable = False
        object.__setattr__(self, "dim", matrix.shape[0])
        object.__setattr__(self, "theta", matrix)
        object.__setattr__(self, "coefficients", coeffs)

    def __setattr__(self, name, value):
        raise AttributeError("GaugeField is immutable")

    @classmethod
    def from_coefficients(cls, dim: int, coefficients: Sequence[float]) -> "GaugeField":
        coeffs = np.asarray(coefficients, dtype=float)
        if coeffs.shape != (dim * dim,):
            raise ValueError(f"need {dim*dim} coefficients for N={dim}")
        theta = np.tensordot(coeffs, generator_basis(dim), axes=1)
        return cls(theta, coefficients=coeffs)

    def __repr__(self):
        return f"GaugeField(dim={self.dim})"


@dataclass(frozen=True)
class Holonomy:
    """Unitary U_AB = exp(i Theta) with its eigen decomposition.

    ``eigenphases`` are the eigenvalues of Theta wrapped to [-pi, pi), in
    ascending order of the raw eigenvalues; ``eigenvectors`` holds the
    matching unit eigenvectors as columns, exactly as produced by the
    Hermitian decomposition (no canonicalization).
    """

    u_ab: np.ndarray
    eigenphases: np.ndarray
    eigenvectors: np.ndarray


def holonomy(gauge: GaugeField) -> Holonomy:
    """Exponentiate the loop integral via Hermitian eigendecomposition.

    Theta = V diag(lambda) V^dag gives U_AB = V diag(exp(i lambda)) V^dag,
    unitary up to roundoff by construction.
    """
    eigenvalues, eigenvectors = np.linalg.eigh(gauge.theta)
    u_ab = (eigenvectors * np.exp(1j * eigenvalues)) @ eigenvectors.conj().T
    return Holonomy(u_ab=u_ab, eigenphases=wrap_angle(eigenvalues),
                    eigenvectors=eigenvectors)


def evolve_spinor(state: WaveState, config: RingConfig, gauge: GaugeField,
                  t: float) -> WaveState:
    """Evolve a spinor-valued state under the gauge field for time t.

    The internal index is rotated into the eigenbasis of Theta; channel b
    evolves with the abelian spectrum at effective flux q Phi / hbar ->
    theta_b, including the channel-dependent overall phase (it is physical
    here, unlike the scalar case); then the basis is rotated back.  Unitary
    overall.  Any abelian flux on ``config`` is ignored: the gauge field
    supersedes it.
    """
    if state.internal_dim != gauge.dim:
        raise ValueError(
            f"dimension mismatch: state N={state.internal_dim}, gauge N={gauge.dim}"
        )
    if t < 0.0:
        raise ValueError("evolve_spinor requires t >= 0")
    eigenvalues, eigenvectors = np.linalg.eigh(gauge.theta)
    channels = state.amplitudes @ eigenvectors.conj()
    modes = state.modes
    phases = np.empty_like(channels)
    for b, lam in enumerate(eigenvalues):
        cycles, global_cycles = mode_phase_cycles(config, modes, t, nu=lam / TWO_PI)
        phases[:, b] = np.exp(2j * math.pi * (cycles + global_cycles))
    rotated_back = (channels * phases) @ eigenvectors.T
    return WaveState(state.cutoff, rotated_back)


def nonabelian_qpe(gauge: GaugeField, channel: int, config: RingConfig,
                   cutoff: int, grid: AngleGrid) -> PhaseEstimate:
    """Estimate the eigenphase of W = U_AB^2 on one internal channel.

    A particle localized at phi = 0 with internal state equal to eigenvector
    b of Theta is evolved for t_R; the density peak appears at
    wrap(-2 theta_b), and the reported ``phase`` is minus that angle, i.e.
    the estimate of W's eigenphase wrap(2 theta_b).
    """
    if not 0 <= channel < gauge.dim:
        raise ValueError(f"channel {channel} out of range for N={gauge.dim}")
    if grid.size < 4 * cutoff + 4:
        raise ValueError(
            f"grid size {grid.size} too coarse for l={cutoff}; need G >= {4*cutoff+4}"
        )
    hol = holonomy(gauge)
    spatial = localized_state(cutoff)
    amps = np.multiply.outer(spatial.amplitudes[:, 0], hol.eigenvectors[:, channel])
    state = WaveState(cutoff, amps)
    evolved = evolve_spinor(state, config, gauge, return_time(config))
    raw = estimate_from_density(grid, density_on_grid(evolved, grid))
    return PhaseEstimate(phase=wrap_angle(-raw.refined_peak),
                         grid_peak=raw.grid_peak, refined_peak=raw.refined_peak,
                         half_width=raw.half_width, distribution=raw.distribution)


@dataclass(frozen=True)
class PeakGroup:
    """Channels sharing one angular peak, with expected and measured mass."""

    target_angle: float
    channels: tuple
    expected_weight: float
    measured_weight: float


@dataclass(frozen=True)
class SuperpositionReport:
    """Angular distribution for a channel mixture and its per-peak weights."""

    distribution: np.ndarray
    groups: tuple


def superposition_check(gauge: GaugeField, weights, config: RingConfig,
                        cutoff: int, grid: AngleGrid) -> SuperpositionReport:
    """Evolve a localized state whose internal vector mixes eigenchannels.

    Channels with weight w_b produce peaks at wrap(-2 theta_b) carrying mass
    |w_b|^2; degenerate eigenphases merge into a single peak.  The measured
    weight of each peak group is the density mass within half the distance
    to the nearest distinct peak.
    """
    weights = np.asarray(weights, dtype=complex)
    if weights.shape != (gauge.dim,):
        raise ValueError(f"need {gauge.dim} channel weights")
    if abs(np.linalg.norm(weights) - 1.0) > 1e-12:
        raise ValueError("channel weight vector must be normalized")
    if grid.size < 4 * cutoff + 4:
        raise ValueError(
            f"grid size {grid.size} too coarse for l={cutoff}; need G >= {4*cutoff+4}"
        )
    hol = holonomy(gauge)
    internal = hol.eigenvectors @ weights
    spatial = localized_state(cutoff)
    state = WaveState(cutoff, np.multiply.outer(spatial.amplitudes[:, 0], internal))
    evolved = evolve_spinor(state, config, gauge, return_time(config))
    density = density_on_grid(evolved, grid)
    distribution = density / (float(np.sum(density)) * grid.spacing)

    targets = wrap_angle(-2.0 * np.asarray(hol.eigenphases))
    groups: list[list[int]] = []
    centers: list[float] = []
    for b, angle in enumerate(targets):
        for gi, center in enumerate(centers):
            if abs(wrap_angle(angle - center)) < 1e-9:
                groups[gi].append(b)
                break
        else:
            groups.append([b])
            centers.append(float(angle))

    def circular_gap(a: float, b: float) -> float:
        return abs(wrap_angle(a - b))

    report_groups = []
    for gi, members in enumerate(groups):
        center = centers[gi]
        others = [c for gj, c in enumerate(centers) if gj != gi]
        window = min((circular_gap(center, c) for c in others), default=math.pi) / 2.0
        gaps = np.abs(wrap_angle(grid.points - center))
        measured = float(np.sum(distribution[gaps <= window]) * grid.spacing)
        expected = float(np.sum(np.abs(weights[members]) ** 2))
        report_groups.append(PeakGroup(target_angle=center, channels=tuple(members),
                                       expected_weight=expected,
                                       measured_weight=measured))
    return SuperpositionReport(distribution=distribution, groups=tuple(report_groups))
