#include "qscatter/scattering.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qscatter/errors.h"
#include "qscatter/phase_network.h"
#include "qscatter/tolerances.h"

namespace qscatter {

namespace {

constexpr double kPi = std::numbers::pi;

// Distance d (in standard deviations) with one-sided Gaussian tail
// erfc(d / sqrt 2) / 2 <= eps.
double tail_sigmas(double eps) {
    eps = std::max(eps, 1e-300);
    double lo = 0;
    double hi = 40;
    for (int i = 0; i < 200; i++) {
        double mid = (lo + hi) / 2;
        if (std::erfc(mid / std::numbers::sqrt2) / 2 > eps) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return hi;
}

void validate_packet(const SimulationConfig &config, const WavePacketSpec &packet) {
    const std::int64_t half = std::int64_t{1} << (config.num_qubits - 1);
    if (packet.k0 <= 0 || packet.k0 >= half) {
        throw ValidationError("peak momentum K0=" + std::to_string(packet.k0) + " must satisfy 0 < K0 < " + std::to_string(half));
    }
    if (!(packet.sigma_k >= 0) || !std::isfinite(packet.sigma_k)) {
        throw ValidationError("momentum width sigma_K must be >= 0");
    }
    if (!(packet.xi0 >= -0.5 && packet.xi0 < 0.5)) {
        throw ValidationError("packet position xi0 must lie in [-1/2, 1/2)");
    }
}

}  // namespace

void SimulationConfig::validate() const {
    if (num_qubits < 1 || num_qubits > kMaxQubits) {
        throw ValidationError("n must be in [1, " + std::to_string(kMaxQubits) + "]");
    }
    if (!(gamma > 0) || !std::isfinite(gamma)) {
        throw ValidationError("gamma must be positive");
    }
    if (!(dtau > 0) || !std::isfinite(dtau)) {
        throw ValidationError("dtau must be positive");
    }
    if (steps < 1) {
        throw ValidationError("step count must be >= 1");
    }
    if (!(epsilon >= 0 && epsilon < 1)) {
        throw ValidationError("epsilon must lie in [0, 1)");
    }
}

double SimulationConfig::grid_spacing() const {
    return std::ldexp(1.0, -num_qubits);
}

double WavePacketSpec::position_width() const {
    return 1 / (4 * kPi * sigma_k);
}

std::string estimate_method_name(EstimateMethod m) {
    return m == EstimateMethod::Exact ? "exact" : "shots";
}

double grid_position(int n, std::uint64_t j) {
    return std::ldexp(static_cast<double>(j), -n) - 0.5;
}

std::uint64_t grid_index(int n, double xi) {
    double scaled = std::round(std::ldexp(xi + 0.5, n));
    double size = std::ldexp(1.0, n);
    scaled = std::clamp(scaled, 0.0, size - 1);
    return static_cast<std::uint64_t>(scaled);
}

PotentialSpec sample_potential(const SimulationConfig &config, const PotentialShape &shape) {
    shape.validate();
    const int n = config.num_qubits;
    PotentialSpec spec{shape, std::vector<double>(config.grid_size(), 0.0)};
    if (shape.kind == PotentialKind::Delta) {
        spec.samples[grid_index(n, shape.center)] = std::ldexp(shape.strength, n);
        return spec;
    }
    for (std::uint64_t j = 0; j < config.grid_size(); j++) {
        spec.samples[j] = shape.value(grid_position(n, j));
    }
    return spec;
}

PotentialShape barrier_from_exponent(double height, int ell) {
    if (ell < 1) {
        throw DomainError("barrier exponent must be >= 1");
    }
    return PotentialShape::barrier(height, std::ldexp(1.0, -ell), 0.0);
}

QuantumState prepare_packet(const SimulationConfig &config, const WavePacketSpec &packet, const PotentialShape *potential) {
    config.validate();
    validate_packet(config, packet);
    const int n = config.num_qubits;
    const std::uint64_t size = config.grid_size();

    if (packet.sigma_k == 0) {
        // Plane wave: uniform superposition, linear phase network, global phase.
        QuantumState state(n);
        for (int q = 1; q <= n; q++) {
            state.apply_single_qubit(q, SingleQubitGate::hadamard());
        }
        double k0 = static_cast<double>(packet.k0);
        linear_phase(state, 2 * kPi * k0 / static_cast<double>(size));
        Amplitude global = std::polar(1.0, -kPi * k0 - 2 * kPi * k0 * packet.xi0);
        for (auto &a : state.amplitudes()) {
            a *= global;
        }
        return state;
    }

    if (potential != nullptr && potential->kind != PotentialKind::Zero) {
        double reach = packet.xi0 + tail_sigmas(config.epsilon) * packet.position_width();
        double left_edge = potential->support().first;
        if (reach >= left_edge) {
            throw PreconditionError("packet extends to xi=" + std::to_string(reach) + ", overlapping the potential starting at xi=" +
                                    std::to_string(left_edge));
        }
    }

    std::vector<Amplitude> momentum(size);
    const double two_var = 4 * packet.sigma_k * packet.sigma_k;
    double peak = 0;
    for (std::uint64_t k = 0; k < size; k++) {
        double kk = static_cast<double>(signed_momentum(k, n));
        double d = kk - static_cast<double>(packet.k0);
        momentum[k] = std::polar(std::exp(-d * d / two_var), -2 * kPi * kk * packet.xi0);
        peak = std::max(peak, std::abs(momentum[k]));
    }
    double total = 0;
    double negative = 0;
    for (std::uint64_t k = 0; k < size; k++) {
        if (std::abs(momentum[k]) < kTolerances.packet_truncation * peak) {
            momentum[k] = 0;
        }
        double w = std::norm(momentum[k]);
        total += w;
        if (signed_momentum(k, n) < 0) {
            negative += w;
        }
    }
    if (negative / total > config.epsilon) {
        throw ValidationError("negative-momentum weight " + std::to_string(negative / total) + " exceeds epsilon=" +
                              std::to_string(config.epsilon) + "; reduce sigma_K");
    }
    return packet_from_momentum_table(momentum);
}

QuantumState packet_from_momentum_table(std::span<const Amplitude> momentum_amplitudes) {
    auto state = QuantumState::from_amplitudes({momentum_amplitudes.begin(), momentum_amplitudes.end()});
    state.normalize();
    return inverse_momentum_readout(std::move(state));
}

TrotterEvolver::TrotterEvolver(const SimulationConfig &config, std::span<const double> potential_samples)
    : num_qubits_(config.num_qubits) {
    config.validate();
    if (potential_samples.size() != config.grid_size()) {
        throw DomainError("potential sample count does not match register size");
    }
    const double theta = config.gamma * config.dtau;
    potential_factors_.resize(potential_samples.size());
    for (std::size_t j = 0; j < potential_samples.size(); j++) {
        if (!std::isfinite(potential_samples[j])) {
            throw ValidationError("potential sample " + std::to_string(j) + " is not finite");
        }
        potential_factors_[j] = std::polar(1.0, wrap_phase(-theta * potential_samples[j]));
    }
    const double alpha = -config.gamma * 4 * kPi * kPi * config.dtau;
    auto phases = kinetic_phases(num_qubits_, alpha);
    // Stored in bit-reversed order so each step skips both reversals.
    kinetic_factors_.resize(phases.size());
    for (std::size_t k = 0; k < phases.size(); k++) {
        kinetic_factors_[reverse_bits(k, num_qubits_)] = std::polar(1.0, phases[k]);
    }
}

void TrotterEvolver::step(QuantumState &state) const {
    state.apply_diagonal(potential_factors_);
    state.qft_bit_reversed();
    state.apply_diagonal(kinetic_factors_);
    state.iqft_bit_reversed();
}

void TrotterEvolver::evolve(QuantumState &state, std::int64_t steps) const {
    if (state.num_qubits() != num_qubits_) {
        throw DomainError("state size does not match the evolver");
    }
    for (std::int64_t s = 0; s < steps; s++) {
        step(state);
    }
}

QuantumState trotter_evolve(QuantumState state, const SimulationConfig &config, const PotentialSpec &potential) {
    TrotterEvolver(config, potential.samples).evolve(state, config.steps);
    return state;
}

double asymptotic_time(const SimulationConfig &config, const WavePacketSpec &packet) {
    if (packet.k0 == 0) {
        throw DomainError("asymptotic time undefined for K0 = 0");
    }
    if (!(config.gamma > 0)) {
        throw DomainError("gamma must be positive");
    }
    double velocity = 4 * kPi * config.gamma * std::abs(static_cast<double>(packet.k0));
    return 2 * std::abs(packet.xi0) / velocity;
}

std::int64_t steps_for_asymptotic_time(const SimulationConfig &config, const WavePacketSpec &packet) {
    double tau = asymptotic_time(config, packet);
    return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(tau / config.dtau - 1e-9)));
}

QuantumState momentum_readout_transform(QuantumState state) {
    state.qft();
    momentum_parity_gate(state);
    return state;
}

QuantumState inverse_momentum_readout(QuantumState state) {
    momentum_parity_gate(state);
    state.iqft();
    return state;
}

ScatteringEstimate estimate_exact(const QuantumState &final_k, const QuantumState &initial_k, const SimulationConfig &config,
                                  double tau, std::int64_t k0) {
    const int n = final_k.num_qubits();
    if (initial_k.num_qubits() != n) {
        throw DomainError("initial and final registers differ in size");
    }
    const std::uint64_t size = final_k.size();
    if (k0 <= 0 || static_cast<std::uint64_t>(k0) >= size / 2) {
        throw DomainError("K0 outside the positive momentum range");
    }
    const double kk = 2 * kPi * static_cast<double>(k0);
    Amplitude reference = initial_k[k0] * std::polar(1.0, wrap_phase(-config.gamma * kk * kk * tau));
    if (std::abs(reference) < kTolerances.reference_amplitude) {
        throw UndefinedPhaseError("initial amplitude at K0 is below " + std::to_string(kTolerances.reference_amplitude));
    }
    ScatteringEstimate est;
    est.method = EstimateMethod::Exact;
    est.reflection = final_k[size - k0] / reference;
    est.transmission = final_k[k0] / reference;
    const std::uint64_t sign_mask = final_k.qubit_mask(1);
    est.p_reflect = sector_probability(final_k, [sign_mask](std::uint64_t k) { return (k & sign_mask) != 0; });
    est.p_transmit = sector_probability(final_k, [sign_mask](std::uint64_t k) { return (k & sign_mask) == 0; });
    return est;
}

QuantumState ancilla_readout_state(const QuantumState &final_k) {
    QuantumState out = final_k.with_ancilla();
    const Control ctrl{1, 1};
    out.apply_controlled({&ctrl, 1}, out.num_qubits(), SingleQubitGate::pauli_x());
    return out;
}

ScatteringEstimate estimate_shots(const QuantumState &final_k, std::uint64_t shots, std::uint64_t seed, ReadoutPath path) {
    if (shots < 1) {
        throw DomainError("shots must be >= 1");
    }
    ShotRecord z = path == ReadoutPath::Direct
                       ? measure_shots(final_k, 1, Basis::Z, shots, seed)
                       : measure_shots(ancilla_readout_state(final_k), final_k.num_qubits() + 1, Basis::Z, shots, seed);
    ShotRecord x = measure_shots(final_k, 1, Basis::X, shots, seed + 1);

    ScatteringEstimate est;
    est.method = EstimateMethod::Shots;
    est.shots = shots;
    est.seed = seed;
    est.p_reflect = (1 - z.mean()) / 2;
    est.p_transmit = 1 - est.p_reflect;
    est.p_reflect_stderr = z.standard_error() / 2;
    // Shots fix only the moduli; phases stay in the raw <X_{k1}>.
    est.reflection = std::sqrt(est.p_reflect);
    est.transmission = std::sqrt(est.p_transmit);
    est.x_mean = x.mean();
    est.x_stderr = x.standard_error();
    return est;
}

TransferMatrix lattice_transfer(const SimulationConfig &config, const PotentialSpec &potential, std::int64_t k0) {
    const int n = config.num_qubits;
    const double k = 2 * kPi * static_cast<double>(k0);
    const double dxi = config.grid_spacing();
    std::size_t lo = potential.samples.size();
    std::size_t hi = 0;
    for (std::size_t j = 0; j < potential.samples.size(); j++) {
        if (potential.samples[j] != 0) {
            lo = std::min(lo, j);
            hi = j;
        }
    }
    if (lo > hi) {
        return TransferMatrix::identity();
    }
    const std::size_t count = hi - lo + 1;
    std::vector<double> etas(count);
    // Units hbar = 2m = 1: eta = u dxi / (2k).
    for (std::size_t m = 0; m < count; m++) {
        etas[m] = potential.samples[lo + m] * dxi / (2 * k);
    }
    const double a = static_cast<double>(count) * dxi;
    const double center = grid_position(n, lo) + a / 2;
    return compose_transfer_chain(etas, k, a, center);
}

PotentialShape lattice_equivalent_shape(const SimulationConfig &config, const PotentialShape &shape) {
    const int n = config.num_qubits;
    switch (shape.kind) {
        case PotentialKind::Zero:
        case PotentialKind::Custom:
            return shape;
        case PotentialKind::Delta:
            return PotentialShape::delta(shape.strength, grid_position(n, grid_index(n, shape.center)));
        case PotentialKind::Barrier:
        case PotentialKind::Well:
            break;
    }
    std::int64_t first = -1;
    std::int64_t last = -1;
    for (std::uint64_t j = 0; j < config.grid_size(); j++) {
        if (shape.value(grid_position(n, j)) != 0) {
            if (first < 0) {
                first = static_cast<std::int64_t>(j);
            }
            last = static_cast<std::int64_t>(j);
        }
    }
    if (first < 0) {
        return PotentialShape::zero();
    }
    const double dxi = config.grid_spacing();
    const double width = static_cast<double>(last - first + 1) * dxi;
    const double center = (grid_position(n, first) + grid_position(n, last)) / 2;
    PotentialShape out = shape;
    out.width = width;
    out.center = center;
    return out;
}

ScatteringAmplitudes simulation_oracle(const SimulationConfig &config, const PotentialShape &shape, std::int64_t k0) {
    if (k0 <= 0) {
        throw DomainError("oracle needs K0 > 0");
    }
    const Units units;
    const double k = 2 * kPi * static_cast<double>(k0);
    if (shape.kind == PotentialKind::Custom) {
        return rt_from_transfer(lattice_transfer(config, sample_potential(config, shape), k0));
    }
    PotentialShape eq = lattice_equivalent_shape(config, shape);
    return rt_from_transfer(oracle_transfer(eq, units.energy(k), OracleMethod::Analytic, 1, units));
}

SimulationResult run_simulation(const SimulationConfig &config, const WavePacketSpec &packet, const PotentialShape &shape,
                                std::uint64_t shots) {
    config.validate();
    PotentialSpec potential = sample_potential(config, shape);
    QuantumState position = prepare_packet(config, packet, &shape);
    QuantumState initial_k = momentum_readout_transform(position);
    TrotterEvolver(config, potential.samples).evolve(position, config.steps);
    QuantumState final_k = momentum_readout_transform(std::move(position));
    const double tau = config.dtau * static_cast<double>(config.steps);
    ScatteringEstimate exact = estimate_exact(final_k, initial_k, config, tau, packet.k0);
    std::optional<ScatteringEstimate> shot_estimate;
    if (shots > 0) {
        shot_estimate = estimate_shots(final_k, shots, config.seed);
    }
    return {std::move(initial_k), std::move(final_k), tau, exact, shot_estimate};
}

}  // namespace qscatter
