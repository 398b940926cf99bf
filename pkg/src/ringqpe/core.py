"""Domain types and state algebra for a charged particle on a ring.

The position of the particle is a single angle phi in [-pi, pi).  States are
stored as truncated angular-momentum expansions

    Psi_a(phi) = sum_{m=-l..l} c[m, a] * exp(i m phi) / sqrt(2 pi)

where ``a`` is an optional internal U(N) index (spinor component).  Everything
in this module is immutable after construction and safe to share across
threads.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * math.pi


def wrap_angle(x):
    """Reduce an angle (scalar or array) to the half-open interval [-pi, pi).

    The result is congruent to ``x`` modulo 2*pi; ties at +pi map to -pi.
    Values already inside the interval are returned bit-exactly, which makes
    the function exactly idempotent.

    Raises ValueError for non-finite input.
    """
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError("wrap_angle: input must be finite")
    wrapped = arr - TWO_PI * np.round(arr / TWO_PI)
    # np.round ties-to-even keeps |wrapped| <= pi; fold the closed end over.
    wrapped = np.where(wrapped >= math.pi, wrapped - TWO_PI, wrapped)
    wrapped = np.where(wrapped < -math.pi, wrapped + TWO_PI, wrapped)
    if np.ndim(x) == 0:
        return float(wrapped)
    return wrapped


def frac_cycles(x):
    """Centered fractional part: x - round(x), in [-1/2, 1/2].

    Used to reduce phase arguments expressed in cycles before exponentiation,
    so that revival times come out exact instead of accumulating 2*pi*m^2
    roundoff.
    """
    x = np.asarray(x, dtype=float)
    out = x - np.round(x)
    if out.ndim == 0:
        return float(out)
    return out


@dataclass(frozen=True)
class RingConfig:
    """Physical constants of the ring system.

    Defaults are natural units hbar = mass = radius = charge = 1 and zero
    flux, which make the return time 4*pi and the flux-induced shift -2*flux
    easy to check by hand.  All formulas keep the constants explicit so
    SI-style values work as well.
    """

    hbar: float = 1.0
    mass: float = 1.0
    radius: float = 1.0
    charge: float = 1.0
    flux: float = 0.0

    def __post_init__(self):
        for name in ("hbar", "mass", "radius"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"RingConfig.{name} must be strictly positive")
        for name in ("hbar", "mass", "radius", "charge", "flux"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"RingConfig.{name} must be finite")

    @property
    def kinetic_scale(self) -> float:
        """hbar / (2 m r^2): the energy unit of the spectrum divided by hbar."""
        return self.hbar / (2.0 * self.mass * self.radius**2)

    @property
    def flux_modes(self) -> float:
        """q Phi / (2 pi hbar): the flux measured in angular-momentum units."""
        return self.charge * self.flux / (TWO_PI * self.hbar)


def mode_numbers(cutoff: int) -> np.ndarray:
    """Integer angular-momentum labels -l..l for a given truncation."""
    return np.arange(-cutoff, cutoff + 1)


class WaveState:
    """Truncated momentum-space wave function c[m, a], m in [-l, l].

    ``amplitudes`` has shape (2l+1, internal_dim); mode m lives at row m + l.
    Instances are immutable; operations return new states.
    """

    __slots__ = ("cutoff", "amplitudes")

    def __init__(self, cutoff: int, amplitudes):
        if cutoff < 1:
            raise ValueError("WaveState cutoff must be >= 1")
        amps = np.array(amplitudes, dtype=complex)
        if amps.ndim == 1:
            amps = amps[:, None]
        if amps.ndim != 2 or amps.shape[0] != 2 * cutoff + 1:
            raise ValueError(
                f"amplitudes must have shape (2l+1={2*cutoff+1}, N), got {amps.shape}"
            )
        amps.flags.writeable = False
        object.__setattr__(self, "cutoff", cutoff)
        object.__setattr__(self, "amplitudes", amps)

    def __setattr__(self, name, value):
        raise AttributeError("WaveState is immutable")

    @property
    def internal_dim(self) -> int:
        return self.amplitudes.shape[1]

    @property
    def modes(self) -> np.ndarray:
        return mode_numbers(self.cutoff)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "WaveState":
        n = self.norm()
        if n == 0.0:
            raise ValueError("cannot normalize the zero state")
        return WaveState(self.cutoff, self.amplitudes / n)

    def coefficient(self, m: int, a: int = 0) -> complex:
        if abs(m) > self.cutoff:
            raise IndexError(f"mode {m} outside cutoff {self.cutoff}")
        return complex(self.amplitudes[m + self.cutoff, a])

    @classmethod
    def pure_mode(cls, cutoff: int, m: int, internal_dim: int = 1, a: int = 0) -> "WaveState":
        """Basis state with c[m, a] = 1 and all other entries zero."""
        if abs(m) > cutoff:
            raise ValueError(f"mode {m} outside cutoff {cutoff}")
        amps = np.zeros((2 * cutoff + 1, internal_dim), dtype=complex)
        amps[m + cutoff, a] = 1.0
        return cls(cutoff, amps)

    @classmethod
    def random(cls, cutoff: int, internal_dim: int = 1, seed: int | None = None) -> "WaveState":
        """Normalized state with i.i.d. complex Gaussian coefficients."""
        rng = np.random.default_rng(seed)
        shape = (2 * cutoff + 1, internal_dim)
        amps = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
        return cls(cutoff, amps).normalized()

    def __repr__(self):
        return f"WaveState(l={self.cutoff}, internal_dim={self.internal_dim})"


@dataclass(frozen=True)
class AngleGrid:
    """Uniform grid phi_i = -pi + 2 pi i / size on [-pi, pi)."""

    size: int

    def __post_init__(self):
        if self.size < 2:
            raise ValueError("AngleGrid size must be >= 2")

    @property
    def spacing(self) -> float:
        return TWO_PI / self.size

    @property
    def points(self) -> np.ndarray:
        return -math.pi + self.spacing * np.arange(self.size)

    def nearest_index(self, angle: float) -> int:
        """Index of the grid point closest to ``angle`` (circular distance)."""
        offset = (wrap_angle(angle) + math.pi) / self.spacing
        return int(round(offset)) % self.size


@dataclass(frozen=True)
class PhaseEstimate:
    """Result of an angular measurement peak search.

    ``distribution`` is a probability density over the measurement grid:
    its entries are >= 0 and sum to 1 after multiplication by the bin width
    2 pi / G.  ``phase`` is the reported phase estimate in [-pi, pi);
    ``refined_peak`` is the sub-bin location of the density maximum and
    ``half_width`` the distance from the peak to the first local minimum.
    """

    phase: float
    grid_peak: int
    refined_peak: float
    half_width: float
    distribution: np.ndarray


def position_amplitude(state: WaveState, phi, a: int = 0):
    """Evaluate component ``a`` of the wave function at angle(s) ``phi``.

    Returns sum_m c[m, a] exp(i m phi) / sqrt(2 pi); linear in the amplitudes.
    """
    if not 0 <= a < state.internal_dim:
        raise IndexError(f"internal index {a} out of range for N={state.internal_dim}")
    phi_arr = np.asarray(phi, dtype=float)
    basis = np.exp(1j * np.multiply.outer(phi_arr, state.modes)) / math.sqrt(TWO_PI)
    values = basis @ state.amplitudes[:, a]
    if np.ndim(phi) == 0:
        return complex(values)
    return values


def density_on_grid(state: WaveState, grid: AngleGrid) -> np.ndarray:
    """Position probability density sum_a |Psi_a(phi_i)|^2 on a grid.

    For a normalized state the Riemann sum (2 pi / G) * sum_i density_i
    equals the norm; it is exact (up to roundoff) once G > 2 * (2l) because
    the density is a trigonometric polynomial of degree 2l.
    """
    basis = np.exp(1j * np.multiply.outer(grid.points, state.modes)) / math.sqrt(TWO_PI)
    values = basis @ state.amplitudes
    return np.sum(np.abs(values) ** 2, axis=1)


def inner(s1: WaveState, s2: WaveState) -> complex:
    """Hilbert-space inner product sum_{m,a} conj(c1) c2."""
    if s1.cutoff != s2.cutoff or s1.internal_dim != s2.internal_dim:
        raise ValueError(
            f"shape mismatch: (l={s1.cutoff}, N={s1.internal_dim}) vs "
            f"(l={s2.cutoff}, N={s2.internal_dim})"
        )
    return complex(np.vdot(s1.amplitudes, s2.amplitudes))
