#include "qscatter/reference.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "qscatter/phase_network.h"

namespace qscatter::reference {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<Amplitude> dft_sign(std::span<const Amplitude> amps, double sign) {
    const std::size_t n = amps.size();
    std::vector<Amplitude> out(n);
    const double scale = 1 / std::sqrt(static_cast<double>(n));
    for (std::size_t k = 0; k < n; k++) {
        Amplitude acc = 0;
        for (std::size_t j = 0; j < n; j++) {
            // Reduce j k mod n first so large products keep full phase precision.
            std::size_t r = (j * k) % n;
            acc += amps[j] * std::polar(1.0, sign * 2 * kPi * static_cast<double>(r) / static_cast<double>(n));
        }
        out[k] = acc * scale;
    }
    return out;
}

int log2_size(std::size_t n) {
    int q = 0;
    while ((std::size_t{1} << q) < n) {
        q++;
    }
    return q;
}

}  // namespace

std::vector<Amplitude> direct_dft(std::span<const Amplitude> amps) {
    return dft_sign(amps, -1);
}

std::vector<Amplitude> direct_idft(std::span<const Amplitude> amps) {
    return dft_sign(amps, +1);
}

std::vector<Amplitude> dense_evolve(std::span<const Amplitude> psi, std::span<const double> potential, double gamma, double tau) {
    const std::size_t n = psi.size();
    const int q = log2_size(n);
    Eigen::MatrixXcd f(n, n);
    const double scale = 1 / std::sqrt(static_cast<double>(n));
    for (std::size_t k = 0; k < n; k++) {
        for (std::size_t j = 0; j < n; j++) {
            f(k, j) = std::polar(scale, -2 * kPi * static_cast<double>((j * k) % n) / static_cast<double>(n));
        }
    }
    Eigen::VectorXd kin(n);
    for (std::size_t k = 0; k < n; k++) {
        double kk = static_cast<double>(signed_momentum(k, q));
        kin(k) = 4 * kPi * kPi * kk * kk;
    }
    Eigen::MatrixXcd h = f.adjoint() * kin.asDiagonal() * f;
    for (std::size_t j = 0; j < n; j++) {
        h(j, j) += potential[j];
    }
    h *= gamma;
    h = (h + h.adjoint().eval()) / 2.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
    Eigen::VectorXcd v(n);
    for (std::size_t j = 0; j < n; j++) {
        v(j) = psi[j];
    }
    Eigen::VectorXcd c = solver.eigenvectors().adjoint() * v;
    for (std::size_t j = 0; j < n; j++) {
        c(j) *= std::polar(1.0, -solver.eigenvalues()(j) * tau);
    }
    Eigen::VectorXcd r = solver.eigenvectors() * c;
    return {r.data(), r.data() + n};
}

std::vector<Amplitude> free_evolve(std::span<const Amplitude> psi, double gamma, double tau) {
    const int q = log2_size(psi.size());
    auto mom = direct_dft(psi);
    for (std::size_t k = 0; k < mom.size(); k++) {
        double kk = static_cast<double>(signed_momentum(k, q));
        mom[k] *= std::polar(1.0, -gamma * 4 * kPi * kPi * kk * kk * tau);
    }
    return direct_idft(mom);
}

double max_abs_diff(std::span<const Amplitude> a, std::span<const Amplitude> b) {
    double m = 0;
    for (std::size_t i = 0; i < std::min(a.size(), b.size()); i++) {
        m = std::max(m, std::abs(a[i] - b[i]));
    }
    return a.size() == b.size() ? m : INFINITY;
}

}  // namespace qscatter::reference
