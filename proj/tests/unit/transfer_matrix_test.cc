#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "../support/oracles.h"
#include "qscatter/errors.h"
#include "qscatter/transfer_matrix.h"

namespace qscatter {
namespace {

constexpr double kPi = std::numbers::pi;
const Complex kI{0, 1};

double matrix_diff(const TransferMatrix &a, const TransferMatrix &b) {
    return std::max({std::abs(a.m11 - b.m11), std::abs(a.m12 - b.m12), std::abs(a.m21 - b.m21), std::abs(a.m22 - b.m22)});
}

TEST(DeltaTransfer, Examples) {
    EXPECT_LT(matrix_diff(delta_transfer(0, 3, 0.2), TransferMatrix::identity()), 1e-15);
    auto m = delta_transfer(1, 2.0, 0);
    EXPECT_LT(matrix_diff(m, {Complex(1, 1), kI, -kI, Complex(1, -1)}), 1e-15);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> d(-5, 5);
    for (int i = 0; i < 100; i++) {
        auto r = delta_transfer(d(rng), std::abs(d(rng)) + 0.1, d(rng));
        EXPECT_LT(std::abs(r.det() - 1.0), 1e-12);
    }
    EXPECT_THROW(delta_transfer(1, 0, 0), DomainError);
    EXPECT_THROW(delta_transfer(1, -1, 0), DomainError);
}

TEST(DeltaTransfer, MatchesShootingOracle) {
    for (double g : {-3.0, 0.5, 4.0}) {
        for (double k : {0.7, 2.0, 9.0}) {
            for (double y : {-0.3, 0.0, 0.41}) {
                auto rt = rt_from_transfer(delta_transfer(delta_eta(g, k), k, y));
                auto [r, t] = oracle::deltas_rt({y}, {g}, k);
                EXPECT_LT(std::abs(rt.reflection - r), 1e-12);
                EXPECT_LT(std::abs(rt.transmission - t), 1e-12);
            }
        }
    }
}

TEST(RtFromTransfer, Examples) {
    auto free = rt_from_transfer(TransferMatrix::identity());
    EXPECT_EQ(free.reflection, Complex(0));
    EXPECT_EQ(free.transmission, Complex(1));

    auto rt = rt_from_transfer(delta_transfer(1, 1, 0));
    EXPECT_NEAR(std::norm(rt.reflection), 0.5, 1e-15);
    EXPECT_NEAR(std::norm(rt.transmission), 0.5, 1e-15);
    for (double eta : {0.1, 1.0, 7.0}) {
        auto d = rt_from_transfer(delta_transfer(eta, 1, 0));
        EXPECT_LT(std::abs(d.transmission - 1.0 / (1.0 + kI * eta)), 1e-15);
    }
    EXPECT_THROW(rt_from_transfer({0, 1, -1, 0}), SingularMatrixError);
}

TEST(TimeReversal, Examples) {
    auto real = time_reversed_rt({0.6, 0.8});
    EXPECT_EQ(real.reflection, Complex(0.6));
    EXPECT_EQ(real.transmission, Complex(0.8));
    for (double eta : {0.3, 2.0}) {
        auto rt = rt_from_transfer(delta_transfer(eta, 1.5, 0.1));
        auto rev = time_reversed_rt(rt);
        EXPECT_EQ(rev.reflection, std::conj(rt.reflection));
        EXPECT_LT(std::abs(rt.reflection * rev.reflection + rt.transmission * rev.transmission - 1.0), 1e-12);
    }
}

TEST(PulseSampling, Examples) {
    auto zero = sample_delta_pulses([](double) { return 0.0; }, 1.0, 10, 2.0);
    for (double e : zero) {
        EXPECT_EQ(e, 0.0);
    }
    const double v0 = 3.0, a = 0.8, k = 1.7;
    auto n10 = sample_delta_pulses([&](double) { return v0; }, a, 10, k);
    auto n20 = sample_delta_pulses([&](double) { return v0; }, a, 20, k);
    ASSERT_EQ(n10.size(), 10u);
    for (double e : n10) {
        EXPECT_NEAR(e, 0.5 * v0 * a / (k * 10), 1e-15);
    }
    EXPECT_NEAR(n20[0] * 2, n10[0], 1e-15);
}

TEST(Chain, SinglePulseIsDelta) {
    const double k = 2.3, a = 0.6, eta = 0.9;
    std::vector<double> one{eta};
    auto chain = compose_transfer_chain(one, k, a);
    EXPECT_LT(matrix_diff(chain, delta_transfer(eta, k, -a / 2)), 1e-14);

    auto free = rt_from_transfer(compose_transfer_chain({}, k, a));
    EXPECT_LT(std::abs(free.reflection), 1e-15);
    EXPECT_NEAR(std::abs(free.transmission), 1, 1e-15);
}

TEST(Chain, MatchesShootingOracleForPulseTrain) {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> d(-2, 2);
    const double k = 3.1, a = 1.3, center = 0.2;
    const int n = 37;
    std::vector<double> etas(n), xs(n), gs(n);
    for (int j = 0; j < n; j++) {
        etas[j] = d(rng);
        xs[j] = center - a / 2 + j * a / n;
        gs[j] = 2 * k * etas[j];
    }
    auto rt = rt_from_transfer(compose_transfer_chain(etas, k, a, center));
    auto [r, t] = oracle::deltas_rt(xs, gs, k);
    EXPECT_LT(std::abs(rt.reflection - r), 1e-11);
    EXPECT_LT(std::abs(rt.transmission - t), 1e-11);
}

TEST(AnalyticBarrier, MatchesShootingOracle) {
    for (double v0 : {-40.0, -3.0, 0.0, 2.0, 25.0}) {
        for (double e : {0.5, 2.0, 30.0}) {
            for (double a : {0.3, 1.0}) {
                auto rt = rt_from_transfer(analytic_barrier_transfer(v0, e, a));
                auto [r, t] = oracle::box_rt(v0, -a / 2, a / 2, e);
                EXPECT_LT(std::abs(rt.reflection - r), 1e-10) << v0 << " " << e << " " << a;
                EXPECT_LT(std::abs(rt.transmission - t), 1e-10);
                auto m = analytic_barrier_transfer(v0, e, a);
                // Evaluating m11 m22 - m12 m21 rounds at the scale of |m11|^2.
                double tol = std::max(1e-12, 16 * std::numeric_limits<double>::epsilon() * std::norm(m.m11));
                EXPECT_LT(std::abs(m.det() - 1.0), tol);
            }
        }
    }
    EXPECT_THROW(analytic_barrier_transfer(1, 0, 1), DomainError);
    EXPECT_THROW(analytic_barrier_transfer(1, -1, 1), DomainError);
}

TEST(AnalyticBarrier, ClosedFormAndLimits) {
    auto free = rt_from_transfer(analytic_barrier_transfer(0, 2, 1));
    EXPECT_LT(std::abs(free.reflection), 1e-15);

    const double v0 = 10, e = 4, a = 0.7;
    const double kappa = std::sqrt(v0 - e), k = std::sqrt(e);
    const double eps_plus = kappa / k + k / kappa;
    auto rt = rt_from_transfer(analytic_barrier_transfer(v0, e, a));
    const double expected = 1 / (1 + eps_plus * eps_plus / 4 * std::pow(std::sinh(kappa * a), 2));
    EXPECT_NEAR(std::norm(rt.transmission), expected, 1e-13);

    auto at = rt_from_transfer(analytic_barrier_transfer(v0, v0, a));
    auto [r, t] = oracle::box_rt(v0, -a / 2, a / 2, v0);
    EXPECT_LT(std::abs(at.transmission - t), 1e-9);

    // Well resonance: sqrt(V0 + E) a = 3 pi.
    const double depth = 50, well_a = 1;
    const double e_res = 9 * kPi * kPi - depth;
    auto res = rt_from_transfer(analytic_barrier_transfer(-depth, e_res, well_a));
    EXPECT_NEAR(std::norm(res.transmission), 1, 1e-12);
}

TEST(PhaseShifts, Examples) {
    auto free = phase_shifts_from_rt({0, 1});
    EXPECT_EQ(free.even, 0);
    EXPECT_EQ(free.odd, 0);
    for (double eta : {0.1, 1.0, 5.0}) {
        auto s = phase_shifts_from_rt(rt_from_transfer(delta_transfer(eta, 1, 0)));
        EXPECT_NEAR(std::tan(s.even), -eta, 1e-12 * (1 + eta * eta));
        EXPECT_NEAR(s.odd, 0, 1e-14);
    }
    auto asym = rt_from_transfer(delta_transfer(1, 1, 0.3));
    EXPECT_THROW(phase_shifts_from_rt(asym), AsymmetryError);
}

TEST(PhaseShifts, EigenvaluesOfSymmetricS) {
    for (double v0 : {-7.0, 3.0, 12.0}) {
        auto rt = rt_from_transfer(analytic_barrier_transfer(v0, 5.0, 0.9));
        auto s = phase_shifts_from_rt(rt);
        for (auto [delta, sign] : {std::pair{s.even, 1.0}, std::pair{s.odd, -1.0}}) {
            Complex lambda = std::exp(2.0 * kI * delta);
            // [[T, R], [R, T]] (1, sign) = (T + sign R) (1, sign)
            EXPECT_LT(std::abs(rt.transmission + sign * rt.reflection - lambda), 1e-12);
            EXPECT_GT(delta, -kPi / 2);
            EXPECT_LE(delta, kPi / 2);
        }
    }
}

TEST(PhaseShifts, RoundTrip) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> d(-kPi / 2 + 1e-6, kPi / 2);
    for (int i = 0; i < 500; i++) {
        PhaseShifts s{d(rng), d(rng)};
        auto back = phase_shifts_from_rt(rt_from_phase_shifts(s));
        EXPECT_NEAR(back.even, s.even, 1e-9);
        EXPECT_NEAR(back.odd, s.odd, 1e-9);
    }
}

TEST(SMatrix, UnitaryAndSymmetric) {
    for (double v0 : {-20.0, 4.0}) {
        for (double e : {1.0, 6.0}) {
            auto m = analytic_barrier_transfer(v0, e, 0.8);
            auto s = s_matrix_from_transfer(m);
            EXPECT_LT(s.unitarity_defect(), 1e-10);
            EXPECT_LT(s.symmetry_defect(), 1e-10);
            EXPECT_LT(s_matrix_from_rt(rt_from_transfer(m)).unitarity_defect(), 1e-10);
        }
    }
    std::vector<double> etas{0.3, -1.2, 0.7, 2.0};
    auto chain = s_matrix_from_transfer(compose_transfer_chain(etas, 2.0, 1.0, 0.4));
    EXPECT_LT(chain.unitarity_defect(), 1e-10);
    EXPECT_LT(chain.symmetry_defect(), 1e-10);
}

TEST(OpticalTheorem, Examples) {
    EXPECT_EQ(optical_theorem_residual({0, 1}, 2.0), 0);
    EXPECT_LT(std::abs(optical_theorem_residual(rt_from_transfer(delta_transfer(1, 1.3, 0)), 1.3)), 1e-12);
    EXPECT_GT(std::abs(optical_theorem_residual({0.5, 0.5}, 1.0)), 1e-3);
}

TEST(OracleTransfer, MethodsAgree) {
    auto well = PotentialShape::well(30, 1.0);
    auto exact = rt_from_transfer(oracle_transfer(well, 5.0, OracleMethod::Analytic, 0));
    auto chain = rt_from_transfer(oracle_transfer(well, 5.0, OracleMethod::PulseChain, 4000));
    EXPECT_LT(std::abs(exact.transmission - chain.transmission), 1e-2);

    auto delta = PotentialShape::delta(3.0, 0.25);
    auto d = rt_from_transfer(oracle_transfer(delta, 4.0, OracleMethod::Analytic, 0));
    auto [r, t] = oracle::deltas_rt({0.25}, {3.0}, 2.0);
    EXPECT_LT(std::abs(d.reflection - r), 1e-12);

    Units units{1.0, 1.0};
    EXPECT_NEAR(units.wavenumber(2.0), 2.0, 1e-15);
    EXPECT_NEAR(units.energy(2.0), 2.0, 1e-15);
}

TEST(TransmissionScan, HighEnergyLimitAndFlags) {
    auto barrier = PotentialShape::barrier(10, 1.0);
    std::vector<double> energies{1e3, 1e4, 1e5};
    auto rows = transmission_scan(barrier, energies, 1000);
    EXPECT_GT(rows.back().transmission_probability, 0.9999);
    for (const auto &r : rows) {
        EXPECT_NEAR(r.transmission_probability + r.reflection_probability, 1, 1e-9);
    }
    std::vector<ScanRow> flagged{{0, 0.2, 0.8, 0, 0, 0}, {1, 0.9, 0.1, 0, 0, 0}, {2, 0.5, 0.5, 0, 0, 0}, {3, 0.7, 0.3, 0, 0, 0}};
    flag_extrema(flagged);
    EXPECT_EQ(flagged[0].extremum, 0);
    EXPECT_EQ(flagged[1].extremum, 1);
    EXPECT_EQ(flagged[2].extremum, -1);
    EXPECT_EQ(flagged[3].extremum, 0);
}

}  // namespace
}  // namespace qscatter
