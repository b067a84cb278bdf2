#ifndef QSCATTER_TRANSFER_MATRIX_H
#define QSCATTER_TRANSFER_MATRIX_H

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "qscatter/potential.h"

namespace qscatter {

using Complex = std::complex<double>;

/// Scale record for the oracle. The defaults hbar = 2m = 1 make the
/// oracle's V(x) coincide with the simulation's dimensionless u(xi).
struct Units {
    double hbar = 1.0;
    double mass = 0.5;

    /// 2m/hbar^2
    double coupling() const {
        return 2 * mass / (hbar * hbar);
    }
    double wavenumber(double energy) const;
    double energy(double k) const;
};

/// Relates plane-wave amplitudes left of a potential, (A, B), to those on
/// its right, (C, D): (A, B)^T = M (C, D)^T.
struct TransferMatrix {
    Complex m11{1}, m12{}, m21{}, m22{1};

    static TransferMatrix identity() {
        return {};
    }
    Complex det() const {
        return m11 * m22 - m12 * m21;
    }
    TransferMatrix operator*(const TransferMatrix &rhs) const;
    /// Same potential translated by `shift`.
    TransferMatrix translated(double shift, double k) const;
};

/// Relates incoming to outgoing amplitudes, (B, C)^T = S (A, D)^T.
struct SMatrix {
    Complex s11, s12, s21, s22;

    /// max |(S S^dagger - I)_{rc}|
    double unitarity_defect() const;
    double symmetry_defect() const {
        return std::abs(s12 - s21);
    }
};

struct ScatteringAmplitudes {
    Complex reflection;
    Complex transmission;
};

/// Even and odd phase shifts in (-pi/2, pi/2].
struct PhaseShifts {
    double even;
    double odd;
};

/// m g / (hbar^2 k)
double delta_eta(double g, double k, const Units &units = {});

/// [[1 + i eta, i eta e^{-2iky}], [-i eta e^{2iky}, 1 - i eta]]
TransferMatrix delta_transfer(double eta, double k, double y);

/// R = M21 / M11, T = 1 / M11. Throws SingularMatrixError when M11 = 0.
ScatteringAmplitudes rt_from_transfer(const TransferMatrix &m);

/// Amplitudes for the opposite wavenumber: (R*, T*).
ScatteringAmplitudes time_reversed_rt(const ScatteringAmplitudes &rt);

/// S in the (left-incoming, right-incoming) basis built from M.
SMatrix s_matrix_from_transfer(const TransferMatrix &m);
/// [[T, R], [R, T]] for a parity-symmetric potential.
SMatrix s_matrix_from_rt(const ScatteringAmplitudes &rt);

/// e^{2i delta_0} = T + R, e^{2i delta_1} = T - R. Throws AsymmetryError
/// when |T +- R| differs from 1 by more than the symmetry tolerance.
PhaseShifts phase_shifts_from_rt(const ScatteringAmplitudes &rt);

/// Forward map (delta_0, delta_1) -> (R, T).
ScatteringAmplitudes rt_from_phase_shifts(const PhaseShifts &shifts);

/// |f(0)|^2 + |f(pi)|^2 - 2 Im f(0) / k with f(0) = (T - 1)/(ik),
/// f(pi) = R/(ik).
double optical_theorem_residual(const ScatteringAmplitudes &rt, double k);

/// Pulse strengths eta_j = (2m/hbar^2)(a/N) V(x_j)/(2k) at
/// x_j = center - a/2 + j a/N, j = 0..N-1.
std::vector<double> sample_delta_pulses(const std::function<double(double)> &potential, double a, int pulses, double k,
                                        const Units &units = {}, double center = 0);

/// U [prod_j M0(eta_j) D] U for pulses spread over [center - a/2,
/// center + a/2), with D = diag(e^{-ika/N}, e^{ika/N}) and
/// U = diag(e^{ika/2}, e^{-ika/2}).
TransferMatrix compose_transfer_chain(std::span<const double> etas, double k, double a, double center = 0);

/// Closed-form matrix of a barrier of height V0 on [-a/2, a/2]; the
/// hyperbolic form is continued analytically to E > V0 and to wells
/// (V0 < 0). Throws DomainError for E <= 0.
TransferMatrix analytic_barrier_transfer(double v0, double energy, double a, const Units &units = {});

enum class OracleMethod { Analytic, PulseChain };

/// Transfer matrix of `shape` at `energy`. Delta, barrier and well use the
/// closed forms unless PulseChain is requested; custom tables always use the
/// pulse chain with `pulses` samples.
TransferMatrix oracle_transfer(const PotentialShape &shape, double energy, OracleMethod method, int pulses,
                               const Units &units = {});

struct ScanRow {
    double parameter;
    double transmission_probability;
    double reflection_probability;
    double arg_transmission;
    double arg_reflection;
    /// +1 local maximum of |T|^2, -1 local minimum, 0 otherwise.
    int extremum;
};

/// |T|^2 over an energy grid using the pulse chain.
std::vector<ScanRow> transmission_scan(const PotentialShape &shape, std::span<const double> energies, int pulses = 1000,
                                       const Units &units = {});

/// |T|^2 at fixed energy while the potential strength runs over `strengths`.
std::vector<ScanRow> transmission_scan_strength(const PotentialShape &shape, std::span<const double> strengths, double energy,
                                                int pulses = 1000, const Units &units = {});

/// Flags strict interior local maxima (+1) and minima (-1) of |T|^2.
void flag_extrema(std::vector<ScanRow> &rows);

}  // namespace qscatter

#endif
