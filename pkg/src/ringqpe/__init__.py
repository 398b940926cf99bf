"""Quantum phase estimation on a ring via the Aharonov-Bohm effect.

A charged particle on a ring threaded by a (possibly non-abelian) flux
implements phase estimation physically: localize the particle, evolve for
the return time, and read the angle of the density peak.  The package also
verifies the discretized path-integral formulation of the same evolution
and its hbar -> 0 behavior.
"""
from .core import (AngleGrid, PhaseEstimate, RingConfig, WaveState,
                   density_on_grid, inner, position_amplitude, wrap_angle)
from .abelian import (EvolutionResult, angular_velocity, energy, evolve,
                      localized_state, return_time, rotated, shift_angle,
                      shift_identity_residual)
from .qpe import (ComparisonReport, MeasurementSample, RegisterQpeSpec,
                  compare_ring_vs_register, estimate_from_density,
                  flux_from_phase, register_qpe_distribution, ring_qpe,
                  sample_positions)
from .nonabelian import (GaugeField, Holonomy, SuperpositionReport,
                         evolve_spinor, generator_basis, holonomy,
                         nonabelian_qpe, superposition_check)
from .pathintegral import (ClassicalScanReport, CostGuardError, Path, PathSpec,
                           PropagatorFit, action, classical_limit_scan,
                           config_space_propagator, linear_term_residual,
                           minimizing_path, phase_space_propagator,
                           poisson_step_check, spectral_propagator,
                           tent_deviation)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
