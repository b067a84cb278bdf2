#include "qscatter/quantum_state.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <mutex>
#include <numbers>
#include <random>

#include "qscatter/errors.h"
#include "qscatter/tolerances.h"

namespace qscatter {

namespace {

constexpr Amplitude kI{0, 1};

// Twiddles and bit-reversal permutation for the fused Fourier network. Level
// t (1-based) combines the Hadamard on qubit t with all controlled phases
// targeting it; scaled_twiddle[t][r] = e^{-i pi r / 2^{n-t}} / sqrt 2.
struct FourierPlan {
    std::vector<std::vector<Amplitude>> scaled_twiddle;
    std::vector<std::vector<Amplitude>> scaled_conj_twiddle;
    std::vector<std::uint32_t> reversed;
};

const FourierPlan &fourier_plan(int n) {
    static std::array<std::once_flag, kMaxQubits + 1> flags;
    static std::array<FourierPlan, kMaxQubits + 1> plans;
    std::call_once(flags[n], [n] {
        FourierPlan &plan = plans[n];
        const double s = std::numbers::sqrt2 / 2;
        plan.scaled_twiddle.resize(n + 1);
        plan.scaled_conj_twiddle.resize(n + 1);
        for (int t = 1; t <= n; t++) {
            std::size_t stride = std::size_t{1} << (n - t);
            auto &w = plan.scaled_twiddle[t];
            auto &wc = plan.scaled_conj_twiddle[t];
            w.resize(stride);
            wc.resize(stride);
            for (std::size_t r = 0; r < stride; r++) {
                Amplitude e = std::polar(1.0, -std::numbers::pi * static_cast<double>(r) / static_cast<double>(stride));
                w[r] = e * s;
                wc[r] = std::conj(e) * s;
            }
        }
        std::size_t size = std::size_t{1} << n;
        plan.reversed.resize(size);
        for (std::size_t i = 0; i < size; i++) {
            std::uint32_t r = 0;
            for (int b = 0; b < n; b++) {
                r |= static_cast<std::uint32_t>((i >> b) & 1U) << (n - 1 - b);
            }
            plan.reversed[i] = r;
        }
    });
    return plans[n];
}

void bit_reverse(std::vector<Amplitude> &amps, const FourierPlan &plan) {
    for (std::size_t i = 0; i < amps.size(); i++) {
        std::size_t r = plan.reversed[i];
        if (i < r) {
            std::swap(amps[i], amps[r]);
        }
    }
}


}  // namespace

SingleQubitGate SingleQubitGate::identity() {
    return {1, 0, 0, 1};
}
SingleQubitGate SingleQubitGate::hadamard() {
    const double s = std::numbers::sqrt2 / 2;
    return {s, s, s, -s};
}
SingleQubitGate SingleQubitGate::pauli_x() {
    return {0, 1, 1, 0};
}
SingleQubitGate SingleQubitGate::pauli_y() {
    return {0, -kI, kI, 0};
}
SingleQubitGate SingleQubitGate::pauli_z() {
    return {1, 0, 0, -1};
}
SingleQubitGate SingleQubitGate::phase(double alpha) {
    return {1, 0, 0, std::polar(1.0, alpha)};
}
SingleQubitGate SingleQubitGate::diagonal(Amplitude d0, Amplitude d1) {
    return {d0, 0, 0, d1};
}
SingleQubitGate SingleQubitGate::y_to_z() {
    return hadamard() * diagonal(1, -kI);
}

double SingleQubitGate::unitarity_defect() const {
    double worst = 0;
    for (int r = 0; r < 2; r++) {
        for (int c = 0; c < 2; c++) {
            Amplitude s = (*this)(r, 0) * std::conj((*this)(c, 0)) + (*this)(r, 1) * std::conj((*this)(c, 1));
            if (r == c) {
                s -= 1.0;
            }
            worst = std::max(worst, std::abs(s));
        }
    }
    return worst;
}

SingleQubitGate SingleQubitGate::adjoint() const {
    return {std::conj(m_[0]), std::conj(m_[2]), std::conj(m_[1]), std::conj(m_[3])};
}

SingleQubitGate SingleQubitGate::operator*(const SingleQubitGate &rhs) const {
    const auto &a = *this;
    return {
        a(0, 0) * rhs(0, 0) + a(0, 1) * rhs(1, 0),
        a(0, 0) * rhs(0, 1) + a(0, 1) * rhs(1, 1),
        a(1, 0) * rhs(0, 0) + a(1, 1) * rhs(1, 0),
        a(1, 0) * rhs(0, 1) + a(1, 1) * rhs(1, 1),
    };
}

QuantumState::QuantumState(int num_qubits) : num_qubits_(num_qubits) {
    if (num_qubits < 1 || num_qubits > kMaxQubits) {
        throw DomainError("qubit count must be in [1, " + std::to_string(kMaxQubits) + "], got " + std::to_string(num_qubits));
    }
    amps_.assign(std::size_t{1} << num_qubits, Amplitude{});
    amps_[0] = 1;
}

QuantumState::QuantumState(int num_qubits, std::vector<Amplitude> amps)
    : num_qubits_(num_qubits), amps_(std::move(amps)) {
}

QuantumState QuantumState::basis_state(int num_qubits, std::uint64_t index) {
    QuantumState s(num_qubits);
    if (index >= s.size()) {
        throw DomainError("basis index " + std::to_string(index) + " out of range for " + std::to_string(num_qubits) + " qubits");
    }
    s.amps_[0] = 0;
    s.amps_[index] = 1;
    return s;
}

QuantumState QuantumState::from_amplitudes(std::vector<Amplitude> amps) {
    if (amps.size() < 2 || !std::has_single_bit(amps.size())) {
        throw DomainError("amplitude count must be a power of two >= 2, got " + std::to_string(amps.size()));
    }
    int n = std::countr_zero(amps.size());
    if (n > kMaxQubits) {
        throw DomainError("more than " + std::to_string(kMaxQubits) + " qubits");
    }
    return QuantumState(n, std::move(amps));
}

double QuantumState::norm_squared() const {
    double s = 0;
    for (const auto &a : amps_) {
        s += std::norm(a);
    }
    return s;
}

void QuantumState::normalize() {
    double s = norm_squared();
    if (!(s > 0)) {
        throw ValidationError("cannot normalize a zero state");
    }
    double f = 1 / std::sqrt(s);
    for (auto &a : amps_) {
        a *= f;
    }
}

void QuantumState::check_qubit(int q, const char *what) const {
    if (q < 1 || q > num_qubits_) {
        throw DomainError(std::string(what) + " qubit " + std::to_string(q) + " outside [1, " + std::to_string(num_qubits_) + "]");
    }
}

std::uint64_t QuantumState::qubit_mask(int q) const {
    check_qubit(q, "");
    return std::uint64_t{1} << (num_qubits_ - q);
}

void QuantumState::apply_single_qubit(int target, const SingleQubitGate &gate) {
    apply_controlled({}, target, gate);
}

void QuantumState::apply_controlled(std::span<const Control> controls, int target, const SingleQubitGate &gate) {
    check_qubit(target, "target");
    if (!gate.is_unitary(kTolerances.gate_unitarity)) {
        throw ValidationError("gate is not unitary (defect " + std::to_string(gate.unitarity_defect()) + ")");
    }
    std::uint64_t used = qubit_mask(target);
    std::uint64_t cmask = 0;
    std::uint64_t cval = 0;
    for (const auto &c : controls) {
        check_qubit(c.qubit, "control");
        std::uint64_t m = qubit_mask(c.qubit);
        if (used & m) {
            throw DomainError("duplicate qubit " + std::to_string(c.qubit) + " in controlled gate");
        }
        used |= m;
        cmask |= m;
        if (c.bit) {
            cval |= m;
        }
    }

    const std::size_t stride = qubit_mask(target);
    const std::size_t size = amps_.size();
    const Amplitude g00 = gate(0, 0), g01 = gate(0, 1), g10 = gate(1, 0), g11 = gate(1, 1);
    if (gate.is_diagonal()) {
        for (std::size_t i = 0; i < size; i++) {
            if ((i & cmask) != cval) {
                continue;
            }
            amps_[i] *= (i & stride) ? g11 : g00;
        }
        return;
    }
    for (std::size_t block = 0; block < size; block += 2 * stride) {
        for (std::size_t i0 = block; i0 < block + stride; i0++) {
            if ((i0 & cmask) != cval) {
                continue;
            }
            std::size_t i1 = i0 + stride;
            Amplitude a0 = amps_[i0];
            Amplitude a1 = amps_[i1];
            amps_[i0] = g00 * a0 + g01 * a1;
            amps_[i1] = g10 * a0 + g11 * a1;
        }
    }
}

void QuantumState::apply(const GateOp &op) {
    apply_controlled(op.controls, op.target, op.gate);
}

void QuantumState::apply(std::span<const GateOp> circuit) {
    for (const auto &op : circuit) {
        apply(op);
    }
}

void QuantumState::apply_diagonal_phases(std::span<const double> phases) {
    if (phases.size() != amps_.size()) {
        throw DomainError("phase table length does not match register size");
    }
    for (std::size_t i = 0; i < amps_.size(); i++) {
        amps_[i] *= std::polar(1.0, phases[i]);
    }
}

void QuantumState::apply_diagonal(std::span<const Amplitude> factors) {
    if (factors.size() != amps_.size()) {
        throw DomainError("diagonal length does not match register size");
    }
    for (std::size_t i = 0; i < amps_.size(); i++) {
        amps_[i] *= factors[i];
    }
}

void QuantumState::qft() {
    qft_bit_reversed();
    bit_reverse(amps_, fourier_plan(num_qubits_));
}

void QuantumState::iqft() {
    bit_reverse(amps_, fourier_plan(num_qubits_));
    iqft_bit_reversed();
}

void QuantumState::qft_bit_reversed() {
    const FourierPlan &plan = fourier_plan(num_qubits_);
    const double s = std::numbers::sqrt2 / 2;
    const std::size_t size = amps_.size();
    for (int t = 1; t <= num_qubits_; t++) {
        const std::size_t stride = std::size_t{1} << (num_qubits_ - t);
        const Amplitude *w = plan.scaled_twiddle[t].data();
        for (std::size_t block = 0; block < size; block += 2 * stride) {
            Amplitude *lo = &amps_[block];
            Amplitude *hi = lo + stride;
            for (std::size_t r = 0; r < stride; r++) {
                Amplitude a0 = lo[r];
                Amplitude a1 = hi[r];
                lo[r] = (a0 + a1) * s;
                hi[r] = (a0 - a1) * w[r];
            }
        }
    }
}

void QuantumState::iqft_bit_reversed() {
    const FourierPlan &plan = fourier_plan(num_qubits_);
    const double s = std::numbers::sqrt2 / 2;
    const std::size_t size = amps_.size();
    for (int t = num_qubits_; t >= 1; t--) {
        const std::size_t stride = std::size_t{1} << (num_qubits_ - t);
        const Amplitude *w = plan.scaled_conj_twiddle[t].data();
        for (std::size_t block = 0; block < size; block += 2 * stride) {
            Amplitude *lo = &amps_[block];
            Amplitude *hi = lo + stride;
            for (std::size_t r = 0; r < stride; r++) {
                Amplitude a0 = lo[r] * s;
                Amplitude a1 = hi[r] * w[r];
                lo[r] = a0 + a1;
                hi[r] = a0 - a1;
            }
        }
    }
}

QuantumState QuantumState::with_ancilla() const {
    if (num_qubits_ + 1 > kMaxQubits) {
        throw DomainError("no room for an ancilla qubit");
    }
    std::vector<Amplitude> out(2 * amps_.size());
    for (std::size_t i = 0; i < amps_.size(); i++) {
        out[2 * i] = amps_[i];
    }
    return QuantumState(num_qubits_ + 1, std::move(out));
}

double QuantumState::probability_one(int qubit) const {
    std::uint64_t m = qubit_mask(qubit);
    return sector_probability(*this, [m](std::uint64_t i) { return (i & m) != 0; });
}

std::uint64_t reverse_bits(std::uint64_t index, int num_qubits) {
    std::uint64_t r = 0;
    for (int b = 0; b < num_qubits; b++) {
        r |= ((index >> b) & 1U) << (num_qubits - 1 - b);
    }
    return r;
}

std::vector<GateOp> qft_network(int n) {
    if (n < 1 || n > kMaxQubits) {
        throw DomainError("qubit count out of range");
    }
    std::vector<GateOp> ops;
    for (int t = 1; t <= n; t++) {
        ops.push_back({{}, t, SingleQubitGate::hadamard()});
        for (int c = t + 1; c <= n; c++) {
            // R_m with m = c - t + 1, conjugated for the e^{-2 pi i jk/N} sign.
            double angle = -2 * std::numbers::pi / std::ldexp(1.0, c - t + 1);
            ops.push_back({{Control{c, 1}}, t, SingleQubitGate::phase(angle)});
        }
    }
    for (int q = 1; q < n + 1 - q; q++) {
        int p = n + 1 - q;
        ops.push_back({{Control{q, 1}}, p, SingleQubitGate::pauli_x()});
        ops.push_back({{Control{p, 1}}, q, SingleQubitGate::pauli_x()});
        ops.push_back({{Control{q, 1}}, p, SingleQubitGate::pauli_x()});
    }
    return ops;
}

std::string basis_name(Basis b) {
    switch (b) {
        case Basis::Z:
            return "Z";
        case Basis::X:
            return "X";
        case Basis::Y:
            return "Y";
    }
    return "?";
}

Basis parse_basis(const std::string &name) {
    if (name == "Z" || name == "z") {
        return Basis::Z;
    }
    if (name == "X" || name == "x") {
        return Basis::X;
    }
    if (name == "Y" || name == "y") {
        return Basis::Y;
    }
    throw DomainError("unknown measurement basis '" + name + "'");
}

double ShotRecord::mean() const {
    auto n = shots();
    if (n == 0) {
        return 0;
    }
    return (static_cast<double>(plus) - static_cast<double>(minus)) / static_cast<double>(n);
}

double ShotRecord::standard_error() const {
    auto n = shots();
    if (n == 0) {
        return 0;
    }
    double p = static_cast<double>(minus) / static_cast<double>(n);
    // <sigma> = 1 - 2 p_minus
    return 2 * std::sqrt(p * (1 - p) / static_cast<double>(n));
}

double outcome_minus_probability(const QuantumState &state, int qubit, Basis basis) {
    if (basis == Basis::Z) {
        return state.probability_one(qubit);
    }
    QuantumState rotated = state;
    rotated.apply_single_qubit(qubit, basis == Basis::X ? SingleQubitGate::hadamard() : SingleQubitGate::y_to_z());
    return rotated.probability_one(qubit);
}

std::uint64_t sample_minus_count(double p_minus, std::uint64_t shots, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uint64_t minus = 0;
    for (std::uint64_t s = 0; s < shots; s++) {
        // 53-bit uniform in [0, 1); independent of the standard library's
        // distribution implementations so counts are portable.
        double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        if (u < p_minus) {
            minus++;
        }
    }
    return minus;
}

ShotRecord measure_shots(const QuantumState &state, int qubit, Basis basis, std::uint64_t shots, std::uint64_t seed) {
    if (shots < 1) {
        throw DomainError("shots must be >= 1");
    }
    double p = std::clamp(outcome_minus_probability(state, qubit, basis), 0.0, 1.0);
    ShotRecord rec;
    rec.basis = basis;
    rec.qubit = qubit;
    rec.seed = seed;
    rec.minus = sample_minus_count(p, shots, seed);
    rec.plus = shots - rec.minus;
    return rec;
}

}  // namespace qscatter
