"""Exact spectral time evolution of a charged particle on a ring with flux.

A static flux Phi threading the ring shifts every eigenenergy to

    E_m = (hbar^2 / 2 m r^2) (m - q Phi / 2 pi hbar)^2

while leaving the eigenfunctions exp(i m phi)/sqrt(2 pi) untouched.  Evolving
for the return time t_R = 4 pi m r^2 / hbar cancels the quadratic part of the
phases, so any state reappears rigidly rotated by -2 q Phi / hbar.

Phases are computed from mode-count arithmetic (integer part split off before
multiplying by 2 pi) so that the t = t_R revival is exact to machine
precision in natural units rather than drifting like 2 pi m^2 eps.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import TWO_PI, RingConfig, WaveState, frac_cycles


@dataclass(frozen=True)
class EvolutionResult:
    """Evolved state with the physically irrelevant overall phase split off.

    ``global_phase_removed`` is the unit scalar exp(-i (hbar/2mr^2)
    (qPhi/2pi hbar)^2 t) that multiplies every mode equally; it has been
    divided out of ``state`` so that state comparisons are phase-free.
    """

    state: WaveState
    elapsed: float
    global_phase_removed: complex


def energy(config: RingConfig, m) -> float:
    """Eigenenergy E_m = (hbar^2 / 2 m_q r^2) (m - q Phi / 2 pi hbar)^2.

    Reduces to (hbar^2 / 2 m_q r^2) m^2 at zero flux.  Accepts scalar or
    array mode numbers.
    """
    shifted = np.asarray(m, dtype=float) - config.flux_modes
    value = config.hbar * config.kinetic_scale * shifted**2
    if np.ndim(m) == 0:
        return float(value)
    return value


def return_time(config: RingConfig) -> float:
    """Quantum-mechanical return time t_R = 4 pi m_q r^2 / hbar.

    At t_R every zero-flux phase factor exp(-i E_m t / hbar) equals one, so
    any initial state revives.  Scales as 1/hbar.
    """
    return 4.0 * math.pi * config.mass * config.radius**2 / config.hbar


def angular_velocity(config: RingConfig) -> float:
    """Drift velocity omega_Phi = q Phi / (2 pi m_q r^2) induced by the flux."""
    return config.charge * config.flux / (TWO_PI * config.mass * config.radius**2)


def shift_angle(config: RingConfig) -> float:
    """Net rotation -omega_Phi * t_R = -2 q Phi / hbar accumulated over t_R.

    Returned unwrapped; wrap with :func:`ringqpe.core.wrap_angle` before
    comparing with measured angles.
    """
    return -2.0 * config.charge * config.flux / config.hbar


def localized_state(cutoff: int) -> WaveState:
    """Truncated delta function at phi = 0: c_m = 1/sqrt(2l+1) for |m| <= l."""
    if cutoff < 1:
        raise ValueError("localized_state requires l >= 1")
    amps = np.full(2 * cutoff + 1, 1.0 / math.sqrt(2 * cutoff + 1), dtype=complex)
    return WaveState(cutoff, amps).normalized()


def mode_phase_cycles(config: RingConfig, modes: np.ndarray, t: float, nu: float | None = None):
    """Per-mode evolution phases at time t, in cycles, with the global
    (mode-independent) part split off.

    Writing tau = t * hbar / (4 pi m r^2) and nu = q Phi / (2 pi hbar), the
    wiggle factor exp(-i E_m t / hbar) equals

        exp(-2 pi i tau m^2) * exp(+4 pi i tau nu m) * exp(-2 pi i tau nu^2).

    Returns (relative_cycles, global_cycles) where the relative part covers
    the first two factors.  The integer part of tau is removed before the
    m^2 multiplication (m^2 * integer is a whole number of cycles), so the
    revival at tau = 1 is exact.
    """
    if nu is None:
        nu = config.flux_modes
    tau = config.kinetic_scale * t / TWO_PI
    tau_frac = tau - round(tau)
    kinetic = frac_cycles(tau_frac * modes.astype(float) ** 2)
    drift = frac_cycles(2.0 * nu * tau * modes)
    return -kinetic + drift, -frac_cycles(tau * nu * nu)


def evolve(state: WaveState, config: RingConfig, t: float) -> EvolutionResult:
    """Evolve a scalar (internal_dim = 1) state for time t >= 0.

    Each coefficient picks up exp(-i E_m t / hbar); the norm is preserved
    exactly because the factors are unit modulus.  The mode-independent
    overall phase is divided out and reported in the result.
    """
    if state.internal_dim != 1:
        raise ValueError("evolve handles internal_dim = 1; use the nonabelian module")
    if t < 0.0:
        raise ValueError("evolve requires t >= 0")
    cycles, global_cycles = mode_phase_cycles(config, state.modes, t)
    global_phase = complex(np.exp(2j * math.pi * global_cycles))
    amps = state.amplitudes * np.exp(2j * math.pi * cycles)[:, None]
    return EvolutionResult(state=WaveState(state.cutoff, amps), elapsed=t,
                           global_phase_removed=global_phase)


def rotated(state: WaveState, alpha: float) -> WaveState:
    """Momentum-space rotation: multiply c_m by exp(i m alpha).

    Maps Psi(phi) to Psi(phi + alpha), i.e. the density pattern moves to
    -alpha.  Exact and grid-free.
    """
    factors = np.exp(2j * math.pi * frac_cycles(state.modes * (alpha / TWO_PI)))
    return WaveState(state.cutoff, state.amplitudes * factors[:, None])


def shift_identity_residual(config: RingConfig, state: WaveState, t: float) -> float:
    """Coefficient-space distance between flux evolution and rotated
    zero-flux evolution.

    With the global phase removed, Psi_Phi(phi, t) = Psi_0(phi + omega_Phi t, t)
    holds exactly, so the returned L2 residual is pure roundoff.
    """
    if state.internal_dim != 1:
        raise ValueError("shift_identity_residual handles internal_dim = 1")
    with_flux = evolve(state, config, t).state
    zero_flux_cfg = RingConfig(hbar=config.hbar, mass=config.mass,
                               radius=config.radius, charge=config.charge, flux=0.0)
    without_flux = evolve(state, zero_flux_cfg, t).state
    reference = rotated(without_flux, angular_velocity(config) * t)
    return float(np.linalg.norm(with_flux.amplitudes - reference.amplitudes))
