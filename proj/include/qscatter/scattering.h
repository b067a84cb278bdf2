#ifndef QSCATTER_SCATTERING_H
#define QSCATTER_SCATTERING_H

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qscatter/potential.h"
#include "qscatter/quantum_state.h"
#include "qscatter/transfer_matrix.h"

namespace qscatter {

/// Dimensionless run parameters. Time evolves under
/// H = gamma [(2 pi)^2 K^2 + u(xi)] on xi in [-1/2, 1/2).
struct SimulationConfig {
    int num_qubits = 10;
    double gamma = 1.0;
    double dtau = 1e-4;
    std::int64_t steps = 1;
    /// Truncation threshold for discarded packet weight.
    double epsilon = 1e-10;
    std::uint64_t seed = 0;

    void validate() const;
    std::uint64_t grid_size() const {
        return std::uint64_t{1} << num_qubits;
    }
    double grid_spacing() const;
};

/// Gaussian momentum packet |F(K)|^2 ~ exp(-(K - K0)^2 / (2 sigma_K^2)) peaked
/// in position at xi0. sigma_k = 0 selects the plane wave |K0>.
struct WavePacketSpec {
    std::int64_t k0 = 0;
    double sigma_k = 0;
    double xi0 = -0.25;

    /// Position-space standard deviation 1/(4 pi sigma_K).
    double position_width() const;
};

/// Potential descriptor with its samples u_j = u(xi_j) on the register grid.
struct PotentialSpec {
    PotentialShape shape;
    std::vector<double> samples;
};

enum class EstimateMethod { Exact, Shots };
std::string estimate_method_name(EstimateMethod m);

struct ScatteringEstimate {
    Complex reflection{};
    Complex transmission{};
    double p_reflect = 0;
    double p_transmit = 0;
    std::uint64_t shots = 0;
    EstimateMethod method = EstimateMethod::Exact;
    std::uint64_t seed = 0;
    /// Shot estimates only: binomial standard error of p_reflect.
    double p_reflect_stderr = 0;
    /// Shot estimates only: raw <X_{k1}> and its standard error.
    double x_mean = 0;
    double x_stderr = 0;
};

/// Grid point xi_j = j 2^{-n} - 1/2.
double grid_position(int num_qubits, std::uint64_t j);

/// Register index whose grid point is nearest to xi.
std::uint64_t grid_index(int num_qubits, double xi);

/// u_j = u(xi_j). A delta of strength g becomes one cell of height g / dxi at
/// the grid point nearest its center.
PotentialSpec sample_potential(const SimulationConfig &config, const PotentialShape &shape);

/// Barrier of height u whose samples cover barrier_support(n, ell).
PotentialShape barrier_from_exponent(double height, int ell);

/// Normalized position-space state of the Gaussian packet (or plane wave).
/// When `potential` is given, the packet must lie entirely to its left.
QuantumState prepare_packet(const SimulationConfig &config, const WavePacketSpec &packet,
                            const PotentialShape *potential = nullptr);

/// Position-space state from a physical momentum table indexed by register
/// value k (entry k holds F~ at K = signed_momentum(k)). Normalized here.
QuantumState packet_from_momentum_table(std::span<const Amplitude> momentum_amplitudes);

/// Repeated first-order Trotter steps exp(-i K dtau) exp(-i V dtau), with
/// both diagonals applied directly.
class TrotterEvolver {
   public:
    TrotterEvolver(const SimulationConfig &config, std::span<const double> potential_samples);

    void step(QuantumState &state) const;
    void evolve(QuantumState &state, std::int64_t steps) const;

   private:
    int num_qubits_;
    std::vector<Amplitude> potential_factors_;
    std::vector<Amplitude> kinetic_factors_;
};

/// Applies config.steps Trotter steps of size config.dtau.
QuantumState trotter_evolve(QuantumState state, const SimulationConfig &config, const PotentialSpec &potential);

/// 2 |xi0| / v_g with group velocity v_g = 4 pi gamma K0.
double asymptotic_time(const SimulationConfig &config, const WavePacketSpec &packet);

/// Steps of size config.dtau needed to reach asymptotic_time (at least 1).
std::int64_t steps_for_asymptotic_time(const SimulationConfig &config, const WavePacketSpec &packet);

/// qft followed by the momentum parity gate: position state -> physical
/// momentum amplitudes F~_K stored at k = K mod 2^n.
QuantumState momentum_readout_transform(QuantumState state);
QuantumState inverse_momentum_readout(QuantumState state);

/// Amplitude-ratio estimator. Both states must be in physical-momentum form;
/// `tau` is the evolved time and `k0` the packet's peak momentum.
ScatteringEstimate estimate_exact(const QuantumState &final_k, const QuantumState &initial_k, const SimulationConfig &config,
                                  double tau, std::int64_t k0);

enum class ReadoutPath {
    /// Measure the momentum-sign qubit k_1 itself.
    Direct,
    /// CNOT k_1 onto a fresh ancilla and measure the ancilla.
    Ancilla,
};

/// Shot-based readout of the momentum-sign qubit. Z shots use `seed`, X shots
/// use `seed + 1`.
ScatteringEstimate estimate_shots(const QuantumState &final_k, std::uint64_t shots, std::uint64_t seed,
                                  ReadoutPath path = ReadoutPath::Direct);

/// Register after the readout CNOT from k_1 onto an appended ancilla.
QuantumState ancilla_readout_state(const QuantumState &final_k);

/// Transfer matrix of the sampled lattice potential read as delta pulses of
/// weight u_j dxi at the grid points, at wavenumber k = 2 pi K0.
TransferMatrix lattice_transfer(const SimulationConfig &config, const PotentialSpec &potential, std::int64_t k0);

/// Continuum potential represented by the register samples, reading each
/// sample as a cell of width dxi centered on its grid point. Barriers and wells
/// span exactly the sampled cells; a delta sits on the grid point carrying it.
/// Custom tables are returned unchanged.
PotentialShape lattice_equivalent_shape(const SimulationConfig &config, const PotentialShape &shape);

/// Oracle (R, T) at k = 2 pi K0 for the potential a simulation actually
/// samples: closed forms of lattice_equivalent_shape, or lattice_transfer for
/// custom tables.
ScatteringAmplitudes simulation_oracle(const SimulationConfig &config, const PotentialShape &shape, std::int64_t k0);

struct SimulationResult {
    QuantumState initial_momentum;
    QuantumState final_momentum;
    double tau;
    ScatteringEstimate exact;
    std::optional<ScatteringEstimate> shots;
};

/// prepare -> evolve -> readout. `shots` = 0 skips the shot estimate.
SimulationResult run_simulation(const SimulationConfig &config, const WavePacketSpec &packet, const PotentialShape &shape,
                                std::uint64_t shots = 0);

}  // namespace qscatter

#endif
