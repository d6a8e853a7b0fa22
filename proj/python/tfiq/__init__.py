"""Transverse-field Ising chains at desk scale: exact ground states, reduced
density matrices, Tsallis q-entropies, Grueneisen sweeps and finite-size fits.

The heavy lifting lives in the C++ extension module; this package re-exports
its surface.
"""

from tfiq._core import (
    ChainSpec,
    Couplings,
    GroundState,
    SchmidtSpectrum,
    TfiqError,
    __version__,
    apply_hamiltonian,
    apply_hamiltonian_explicit,
    block_probabilities,
    couplings_at,
    dense_hamiltonian,
    entropy_sweep,
    extensivity_report,
    fit_gamma_extrapolation,
    fit_spin_power_law,
    gamma_from_curve,
    ground_state,
    ground_state_dense,
    hilbert_dimension,
    locate_peak,
    q_log,
    q_special_ising,
    q_special_xy,
    qlog_abscissa,
    rdm_probabilities,
    schmidt_spectrum,
    single_site_rdm,
    spin_operators,
    tsallis_entropy,
)

__all__ = [
    "ChainSpec",
    "Couplings",
    "GroundState",
    "SchmidtSpectrum",
    "TfiqError",
    "__version__",
    "apply_hamiltonian",
    "apply_hamiltonian_explicit",
    "block_probabilities",
    "couplings_at",
    "dense_hamiltonian",
    "entropy_sweep",
    "extensivity_report",
    "fit_gamma_extrapolation",
    "fit_spin_power_law",
    "gamma_from_curve",
    "ground_state",
    "ground_state_dense",
    "hilbert_dimension",
    "locate_peak",
    "q_log",
    "q_special_ising",
    "q_special_xy",
    "qlog_abscissa",
    "rdm_probabilities",
    "schmidt_spectrum",
    "single_site_rdm",
    "spin_operators",
    "tsallis_entropy",
]
