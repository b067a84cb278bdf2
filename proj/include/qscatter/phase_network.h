#ifndef QSCATTER_PHASE_NETWORK_H
#define QSCATTER_PHASE_NETWORK_H

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qscatter/quantum_state.h"

namespace qscatter {

/// diag(1, e^{i phase}) on `target`, fired only when every control matches.
struct PhaseGate {
    std::vector<Control> controls;
    int target;
    double phase;
    bool operator==(const PhaseGate &) const = default;
};

/// Ordered list of controlled phase gates realizing a diagonal unitary.
/// Phases are stored reduced to (-pi, pi].
class PhaseNetwork {
   public:
    explicit PhaseNetwork(int num_qubits);

    void add(std::vector<Control> controls, int target, double phase);

    int num_qubits() const {
        return num_qubits_;
    }
    std::span<const PhaseGate> gates() const {
        return gates_;
    }
    std::size_t gate_count() const {
        return gates_.size();
    }

    /// Gate-by-gate application.
    void apply(QuantumState &state) const;
    /// Total phase the network imprints on each basis index.
    std::vector<double> diagonal_phases() const;
    std::vector<GateOp> to_circuit() const;

    /// One gate per line: `controls target phase`, controls written as
    /// comma-separated `qubit:bit` pairs or `-` when empty. A leading
    /// `# qubits N` line records the register size.
    std::string to_text() const;
    static PhaseNetwork from_text(std::string_view text);

    bool operator==(const PhaseNetwork &) const = default;

   private:
    int num_qubits_;
    std::vector<PhaseGate> gates_;
};

/// Phase reduced to (-pi, pi].
double wrap_phase(double phase);

/// e^{i alpha j}: one G_l = diag(1, e^{i alpha 2^{n-l}}) per qubit.
PhaseNetwork linear_phase_network(int num_qubits, double alpha);

/// e^{i alpha j^2}: n uncontrolled gates G_{l,l} and n^2 - n singly
/// controlled gates G_{l1,l2} = diag(1, e^{i alpha 2^{2n-l1-l2}}).
PhaseNetwork quadratic_phase_network(int num_qubits, double alpha);

/// e^{i alpha K^2} with K the signed momentum of register value k.
///
/// Built from the quadratic network on k_2..k_n, the linear network on the
/// full register controlled by k_1 (its k_1 term needs no control) with
/// angle -2^n alpha, and one constant phase 3 alpha 2^{2n-2} on k_1.
/// Gate count is n^2 - n + 2.
PhaseNetwork kinetic_network(int num_qubits, double alpha);

/// Inclusive index range [lo, hi] of the centered barrier with exponent
/// `ell`: 2^{n-1} - 2^{n-1-ell} <= j <= 2^{n-1} + 2^{n-1-ell} - 1.
std::pair<std::uint64_t, std::uint64_t> barrier_support(int num_qubits, int ell);

/// Two multi-controlled phase gates imprinting e^{i phase} on
/// barrier_support(n, ell): one on k_1 for the right half, one on k_{ell+1}
/// for the left half. Requires 1 <= ell < n - 1.
PhaseNetwork barrier_network(int num_qubits, int ell, double phase);

/// Single phase gate e^{i pi} on the least significant qubit.
PhaseNetwork momentum_parity_network(int num_qubits);

/// Signed momentum K of register value k (k for k < 2^{n-1}, else k - 2^n).
std::int64_t signed_momentum(std::uint64_t k, int num_qubits);

// Operations on states. The network variants apply gate by gate; the
// *_phases helpers return the direct diagonal used by the simulation backend.

void linear_phase(QuantumState &state, double alpha);
void quadratic_phase(QuantumState &state, double alpha);
/// State must be in the k-basis.
void kinetic_gate(QuantumState &state, double alpha);
/// amps[j] <- e^{-i theta u_j} amps[j]. Throws ValidationError on
/// non-finite samples.
void potential_gate(QuantumState &state, std::span<const double> u, double theta);
void barrier_network_gate(QuantumState &state, double height, int ell, double theta);
/// amps[k] <- (-1)^{k_n} amps[k]; state must be in the k-basis.
void momentum_parity_gate(QuantumState &state);

std::vector<double> linear_phases(int num_qubits, double alpha);
std::vector<double> quadratic_phases(int num_qubits, double alpha);
std::vector<double> kinetic_phases(int num_qubits, double alpha);

}  // namespace qscatter

#endif
