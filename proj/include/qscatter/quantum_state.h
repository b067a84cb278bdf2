#ifndef QSCATTER_QUANTUM_STATE_H
#define QSCATTER_QUANTUM_STATE_H

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace qscatter {

using Amplitude = std::complex<double>;

inline constexpr int kMaxQubits = 26;

/// 2x2 complex matrix acting on one qubit, stored row-major.
class SingleQubitGate {
   public:
    constexpr SingleQubitGate(Amplitude m00, Amplitude m01, Amplitude m10, Amplitude m11)
        : m_{m00, m01, m10, m11} {
    }

    static SingleQubitGate identity();
    static SingleQubitGate hadamard();
    static SingleQubitGate pauli_x();
    static SingleQubitGate pauli_y();
    static SingleQubitGate pauli_z();
    /// diag(1, e^{i alpha})
    static SingleQubitGate phase(double alpha);
    static SingleQubitGate diagonal(Amplitude d0, Amplitude d1);
    /// S^dagger followed by H; maps the Y eigenbasis onto the Z eigenbasis.
    static SingleQubitGate y_to_z();

    Amplitude operator()(int row, int col) const {
        return m_[2 * row + col];
    }
    bool is_diagonal() const {
        return m_[1] == Amplitude{} && m_[2] == Amplitude{};
    }
    /// max |(U U^dagger - I)_{rc}|
    double unitarity_defect() const;
    bool is_unitary(double tol) const {
        return unitarity_defect() <= tol;
    }
    SingleQubitGate adjoint() const;
    SingleQubitGate operator*(const SingleQubitGate &rhs) const;

   private:
    std::array<Amplitude, 4> m_;
};

/// Control condition: the gate fires only when `qubit` holds `bit`.
struct Control {
    int qubit;
    int bit = 1;
    bool operator==(const Control &) const = default;
};

/// One gate of a circuit: `gate` on `target`, conditioned on `controls`.
struct GateOp {
    std::vector<Control> controls;
    int target;
    SingleQubitGate gate;
};

/// Dense register of n qubits.
///
/// Qubit 1 is the most significant bit of the basis index:
/// j = j_1 2^{n-1} + j_2 2^{n-2} + ... + j_n. The same register holds either
/// a position-space wavefunction (index j) or a momentum-space one (index k).
class QuantumState {
   public:
    /// |0...0> on `num_qubits` qubits.
    explicit QuantumState(int num_qubits);

    static QuantumState basis_state(int num_qubits, std::uint64_t index);
    /// Takes ownership of `amps`; the length must be a power of two. The
    /// vector is used as given (no normalization).
    static QuantumState from_amplitudes(std::vector<Amplitude> amps);

    int num_qubits() const {
        return num_qubits_;
    }
    std::size_t size() const {
        return amps_.size();
    }
    std::span<const Amplitude> amplitudes() const {
        return amps_;
    }
    std::span<Amplitude> amplitudes() {
        return amps_;
    }
    const Amplitude &operator[](std::size_t i) const {
        return amps_[i];
    }
    Amplitude &operator[](std::size_t i) {
        return amps_[i];
    }

    double norm_squared() const;
    void normalize();

    /// Bit mask of qubit `q` (1-based, 1 = most significant).
    std::uint64_t qubit_mask(int q) const;

    void apply_single_qubit(int target, const SingleQubitGate &gate);
    void apply_controlled(std::span<const Control> controls, int target, const SingleQubitGate &gate);
    void apply(const GateOp &op);
    void apply(std::span<const GateOp> circuit);

    /// amps[j] <- e^{i phases[j]} amps[j]
    void apply_diagonal_phases(std::span<const double> phases);
    /// amps[j] <- factors[j] amps[j]
    void apply_diagonal(std::span<const Amplitude> factors);

    /// amps'[k] = 2^{-n/2} sum_j e^{-2 pi i j k / 2^n} amps[j]
    void qft();
    void iqft();
    /// qft without the final bit reversal (output index is bit-reversed k),
    /// and its inverse, which expects that ordering on input.
    void qft_bit_reversed();
    void iqft_bit_reversed();

    /// Register with one extra qubit appended as the new least significant
    /// qubit (index n+1), initialized to |0>.
    QuantumState with_ancilla() const;

    /// Probability that `qubit` reads 1 in the computational basis.
    double probability_one(int qubit) const;

    bool operator==(const QuantumState &) const = default;

   private:
    QuantumState(int num_qubits, std::vector<Amplitude> amps);
    void check_qubit(int q, const char *what) const;

    int num_qubits_;
    std::vector<Amplitude> amps_;
};

/// Index with the low `num_qubits` bits in reverse order.
std::uint64_t reverse_bits(std::uint64_t index, int num_qubits);

/// Circuit of Hadamards, controlled phases and swaps (three CNOTs each)
/// realizing QuantumState::qft gate by gate.
std::vector<GateOp> qft_network(int num_qubits);

/// Sum of |amps[i]|^2 over indices accepted by `pred`.
template <typename Predicate>
double sector_probability(const QuantumState &state, Predicate &&pred) {
    double p = 0;
    auto amps = state.amplitudes();
    for (std::size_t i = 0; i < amps.size(); i++) {
        if (pred(static_cast<std::uint64_t>(i))) {
            p += std::norm(amps[i]);
        }
    }
    return p;
}

enum class Basis { Z, X, Y };

std::string basis_name(Basis b);
Basis parse_basis(const std::string &name);

/// Outcome counts of repeated single-qubit measurements.
struct ShotRecord {
    Basis basis = Basis::Z;
    int qubit = 1;
    std::uint64_t plus = 0;   // outcome +1 (bit 0 after basis change)
    std::uint64_t minus = 0;  // outcome -1
    std::uint64_t seed = 0;

    std::uint64_t shots() const {
        return plus + minus;
    }
    /// Empirical <sigma>.
    double mean() const;
    /// Binomial standard error of mean().
    double standard_error() const;
};

/// Exact probability of outcome -1 when `qubit` is measured in `basis`.
double outcome_minus_probability(const QuantumState &state, int qubit, Basis basis);

/// Samples `shots` outcomes from the exact marginal of `qubit`. The draw
/// sequence depends only on `seed`.
ShotRecord measure_shots(const QuantumState &state, int qubit, Basis basis, std::uint64_t shots, std::uint64_t seed);

/// Counts of outcome -1 in `shots` Bernoulli(p_minus) draws from `seed`.
std::uint64_t sample_minus_count(double p_minus, std::uint64_t shots, std::uint64_t seed);

}  // namespace qscatter

#endif
