#ifndef QSCATTER_TOLERANCES_H
#define QSCATTER_TOLERANCES_H

namespace qscatter {

/// Numerical thresholds shared by every module. Tests and the CLI read the
/// same values so that a change here moves all checks together.
struct Tolerances {
    /// |sum |a_j|^2 - 1| allowed after unitary evolution.
    double norm = 1e-10;
    /// Gate unitarity check performed when a gate is applied.
    double gate_unitarity = 1e-9;
    /// |det M - 1| for a single transfer matrix.
    double determinant = 1e-10;
    /// Per-factor determinant drift allowed in a pulse chain.
    double chain_determinant_per_factor = 1e-9;
    /// |R|^2 + |T|^2 - 1 for oracle values and P_refl + P_trans - 1 for
    /// exact simulations.
    double unitarity = 1e-9;
    /// | |T +- R| - 1 | beyond which a potential is declared asymmetric.
    double phase_shift_symmetry = 1e-6;
    /// Smallest |F_0(K0)| for which the ratio estimator defines a phase.
    double reference_amplitude = 1e-12;
    /// Relative magnitude below which momentum amplitudes are dropped when
    /// a packet is prepared.
    double packet_truncation = 1e-16;
    /// Quantum-vs-oracle agreement: relative modulus error.
    double oracle_modulus = 0.02;
    /// Quantum-vs-oracle agreement: phase error in radians.
    double oracle_phase = 0.05;
};

inline constexpr Tolerances kTolerances{};

}  // namespace qscatter

#endif
