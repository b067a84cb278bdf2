#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qscatter/errors.h"
#include "qscatter/quantum_state.h"
#include "qscatter/reference.h"
#include "test_helpers.h"

namespace qscatter {
namespace {

using testing::max_diff;
using testing::random_state;
using testing::to_vector;

constexpr double kSqrtHalf = std::numbers::sqrt2 / 2;

TEST(QuantumState, BasisStates) {
    auto s = QuantumState::basis_state(1, 0);
    EXPECT_EQ(s[0], Amplitude(1));
    EXPECT_EQ(s[1], Amplitude(0));

    auto t = QuantumState::basis_state(3, 5);
    for (std::size_t i = 0; i < 8; i++) {
        EXPECT_EQ(t[i], Amplitude(i == 5 ? 1 : 0));
    }
    EXPECT_THROW(QuantumState::basis_state(1, 2), DomainError);
    EXPECT_THROW(QuantumState(0), DomainError);
    EXPECT_THROW(QuantumState(kMaxQubits + 1), DomainError);
    EXPECT_THROW(QuantumState::from_amplitudes(std::vector<Amplitude>(3)), DomainError);
}

TEST(QuantumState, QubitOneIsMostSignificant) {
    auto s = QuantumState::basis_state(3, 0);
    s.apply_single_qubit(1, SingleQubitGate::pauli_x());
    EXPECT_EQ(s[4], Amplitude(1));
    s.apply_single_qubit(3, SingleQubitGate::pauli_x());
    EXPECT_EQ(s[5], Amplitude(1));
}

TEST(QuantumState, SingleQubitExamples) {
    auto h = QuantumState::basis_state(1, 0);
    h.apply_single_qubit(1, SingleQubitGate::hadamard());
    EXPECT_NEAR(std::abs(h[0] - kSqrtHalf), 0, 1e-15);
    EXPECT_NEAR(std::abs(h[1] - kSqrtHalf), 0, 1e-15);

    std::mt19937_64 rng(1);
    auto psi = random_state(4, rng);
    auto same = psi;
    same.apply_single_qubit(2, SingleQubitGate::identity());
    EXPECT_EQ(same, psi);

    const double alpha = 0.7;
    auto one = QuantumState::basis_state(1, 1);
    one.apply_single_qubit(1, SingleQubitGate::phase(alpha));
    EXPECT_NEAR(std::abs(one[1] - std::polar(1.0, alpha)), 0, 1e-15);
}

TEST(QuantumState, GateValidation) {
    QuantumState s(2);
    EXPECT_THROW(s.apply_single_qubit(1, SingleQubitGate(1, 1, 0, 1)), ValidationError);
    EXPECT_THROW(s.apply_single_qubit(0, SingleQubitGate::hadamard()), DomainError);
    EXPECT_THROW(s.apply_single_qubit(3, SingleQubitGate::hadamard()), DomainError);
    for (auto g : {SingleQubitGate::hadamard(), SingleQubitGate::pauli_x(), SingleQubitGate::pauli_y(),
                   SingleQubitGate::pauli_z(), SingleQubitGate::phase(1.3), SingleQubitGate::y_to_z()}) {
        EXPECT_LT(g.unitarity_defect(), 1e-15);
    }
}

TEST(QuantumState, YToZMapsYEigenstates) {
    auto plus_i = QuantumState::from_amplitudes({kSqrtHalf, Amplitude(0, kSqrtHalf)});
    plus_i.apply_single_qubit(1, SingleQubitGate::y_to_z());
    EXPECT_NEAR(std::norm(plus_i[0]), 1, 1e-15);
}

TEST(QuantumState, ControlledExamples) {
    std::vector<Control> c1{{1, 1}};
    auto s = QuantumState::basis_state(2, 0b10);
    s.apply_controlled(c1, 2, SingleQubitGate::pauli_x());
    EXPECT_EQ(s[0b11], Amplitude(1));

    auto z = QuantumState::basis_state(2, 0b00);
    z.apply_controlled(c1, 2, SingleQubitGate::pauli_x());
    EXPECT_EQ(z[0b00], Amplitude(1));

    auto only_set = QuantumState::basis_state(3, 0b001);
    auto before = only_set;
    only_set.apply_controlled(c1, 3, SingleQubitGate::phase(0.4));
    EXPECT_EQ(only_set, before);

    auto zero_ctrl = QuantumState::basis_state(2, 0b00);
    zero_ctrl.apply_controlled(std::vector<Control>{{1, 0}}, 2, SingleQubitGate::pauli_x());
    EXPECT_EQ(zero_ctrl[0b01], Amplitude(1));

    EXPECT_THROW(s.apply_controlled(std::vector<Control>{{2, 1}}, 2, SingleQubitGate::pauli_x()), DomainError);
    EXPECT_THROW(s.apply_controlled(std::vector<Control>{{1, 1}, {1, 0}}, 2, SingleQubitGate::pauli_x()), DomainError);
}

TEST(QuantumState, QftSingleQubit) {
    auto zero = QuantumState::basis_state(1, 0);
    zero.qft();
    EXPECT_NEAR(std::abs(zero[0] - kSqrtHalf), 0, 1e-15);
    EXPECT_NEAR(std::abs(zero[1] - kSqrtHalf), 0, 1e-15);

    auto one = QuantumState::basis_state(1, 1);
    one.qft();
    EXPECT_NEAR(std::abs(one[0] - kSqrtHalf), 0, 1e-15);
    EXPECT_NEAR(std::abs(one[1] + kSqrtHalf), 0, 1e-15);
}

TEST(QuantumState, QftUsesMinusSign) {
    // |1> on n=2 goes to sum_k e^{-2 pi i k / 4} |k> / 2.
    auto s = QuantumState::basis_state(2, 1);
    s.qft();
    EXPECT_NEAR(std::abs(s[1] - Amplitude(0, -0.5)), 0, 1e-15);
    EXPECT_NEAR(std::abs(s[3] - Amplitude(0, 0.5)), 0, 1e-15);
}

TEST(QuantumState, QftMatchesDirectSum) {
    std::mt19937_64 rng(3);
    for (int n = 1; n <= 8; n++) {
        auto psi = random_state(n, rng);
        auto expected = reference::direct_dft(psi.amplitudes());
        psi.qft();
        EXPECT_LT(reference::max_abs_diff(psi.amplitudes(), expected), 1e-12) << "n=" << n;
    }
}

TEST(QuantumState, QftRoundTrip) {
    std::mt19937_64 rng(4);
    for (int n = 1; n <= 12; n++) {
        auto psi = random_state(n, rng);
        auto copy = psi;
        copy.qft();
        copy.iqft();
        EXPECT_LT(max_diff(copy, psi), 1e-12) << "n=" << n;
        copy.iqft();
        copy.qft();
        EXPECT_LT(max_diff(copy, psi), 1e-12) << "n=" << n;
    }
}

TEST(QuantumState, BitReversedTransformsCompose) {
    std::mt19937_64 rng(5);
    const int n = 7;
    auto psi = random_state(n, rng);
    auto full = psi;
    full.qft();
    auto partial = psi;
    partial.qft_bit_reversed();
    for (std::uint64_t k = 0; k < psi.size(); k++) {
        EXPECT_LT(std::abs(partial[reverse_bits(k, n)] - full[k]), 1e-13);
    }
    partial.iqft_bit_reversed();
    EXPECT_LT(max_diff(partial, psi), 1e-12);
    EXPECT_EQ(reverse_bits(0b0011, 4), 0b1100u);
}

TEST(QuantumState, QftNetworkMatchesTransform) {
    std::mt19937_64 rng(6);
    for (int n = 1; n <= 7; n++) {
        auto psi = random_state(n, rng);
        auto by_gates = psi;
        by_gates.apply(qft_network(n));
        psi.qft();
        EXPECT_LT(max_diff(by_gates, psi), 1e-12) << "n=" << n;
    }
}

TEST(QuantumState, NormPreservedUnderRandomCircuits) {
    std::mt19937_64 rng(7);
    for (int n : {2, 6, 12, 16}) {
        auto psi = random_state(n, rng);
        std::uniform_int_distribution<int> qubit(1, n);
        std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
        const int gates = n == 16 ? 400 : 10000;
        for (int g = 0; g < gates; g++) {
            int t = qubit(rng);
            int c = qubit(rng);
            switch (g % 4) {
                case 0:
                    psi.apply_single_qubit(t, SingleQubitGate::hadamard());
                    break;
                case 1:
                    psi.apply_single_qubit(t, SingleQubitGate::phase(angle(rng)));
                    break;
                case 2:
                    if (c != t) {
                        psi.apply_controlled(std::vector<Control>{{c, 1}}, t, SingleQubitGate::pauli_x());
                    }
                    break;
                default:
                    psi.apply_single_qubit(t, SingleQubitGate::y_to_z());
            }
        }
        EXPECT_LT(std::abs(psi.norm_squared() - 1), 1e-10) << "n=" << n;
    }
}

TEST(QuantumState, WithAncillaAppendsLeastSignificantQubit) {
    auto s = QuantumState::basis_state(2, 0b10);
    auto a = s.with_ancilla();
    EXPECT_EQ(a.num_qubits(), 3);
    EXPECT_EQ(a[0b100], Amplitude(1));
}

TEST(Shots, Marginals) {
    auto plus = QuantumState::basis_state(1, 0);
    plus.apply_single_qubit(1, SingleQubitGate::hadamard());
    EXPECT_DOUBLE_EQ(outcome_minus_probability(plus, 1, Basis::Z), 0.5);
    EXPECT_NEAR(outcome_minus_probability(plus, 1, Basis::X), 0, 1e-15);
    auto rec = measure_shots(plus, 1, Basis::X, 1000, 3);
    EXPECT_EQ(rec.plus, 1000u);
    EXPECT_EQ(rec.mean(), 1.0);

    const double alpha = 1.1, theta = 0.3;
    auto spin = QuantumState::from_amplitudes({std::polar(std::cos(alpha / 2), theta), std::sin(alpha / 2)});
    double z = 1 - 2 * outcome_minus_probability(spin, 1, Basis::Z);
    EXPECT_NEAR(z, std::cos(alpha), 1e-15);
}

TEST(Shots, DeterministicAndUnbiased) {
    auto s = QuantumState::from_amplitudes({std::sqrt(0.3), std::sqrt(0.7)});
    auto a = measure_shots(s, 1, Basis::Z, 100000, 11);
    auto b = measure_shots(s, 1, Basis::Z, 100000, 11);
    auto c = measure_shots(s, 1, Basis::Z, 100000, 12);
    EXPECT_EQ(a.minus, b.minus);
    EXPECT_EQ(a.shots(), 100000u);
    const double exact = 1 - 2 * 0.7;
    for (const auto &r : {a, c}) {
        double sigma = 2 * std::sqrt(0.3 * 0.7 / 100000);
        EXPECT_LT(std::abs(r.mean() - exact), 5 * sigma);
        EXPECT_NEAR(r.standard_error(), sigma, 0.05 * sigma);
    }
    EXPECT_THROW(measure_shots(s, 1, Basis::Z, 0, 1), DomainError);
}

TEST(SectorProbability, Examples) {
    std::mt19937_64 rng(8);
    auto psi = random_state(5, rng);
    EXPECT_NEAR(sector_probability(psi, [](std::uint64_t) { return true; }), 1, 1e-14);
    EXPECT_EQ(sector_probability(psi, [](std::uint64_t) { return false; }), 0);
    auto k0 = QuantumState::basis_state(2, 0);
    EXPECT_EQ(sector_probability(k0, [](std::uint64_t k) { return (k & 0b10) == 0; }), 1);
}

TEST(Basis, NamesRoundTrip) {
    for (auto b : {Basis::Z, Basis::X, Basis::Y}) {
        EXPECT_EQ(parse_basis(basis_name(b)), b);
    }
}

}  // namespace
}  // namespace qscatter
