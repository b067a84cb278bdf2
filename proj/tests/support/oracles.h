#ifndef QSCATTER_TESTS_ORACLES_H
#define QSCATTER_TESTS_ORACLES_H

// Independent reference computations for tests. Nothing here calls into the
// transfer-matrix code: amplitudes come from integrating the Schroedinger
// equation piecewise, right to left, starting from a pure transmitted wave.

#include <algorithm>
#include <cmath>
#include <complex>
#include <utility>
#include <vector>

namespace oracle {

using C = std::complex<double>;

struct Shooter {
    // psi'' = c (V - E) psi with c = 2m / hbar^2.
    double c;
    double k;
    C psi;
    C dpsi;
    double x;

    Shooter(double c_, double k_, double x_start) : c(c_), k(k_), x(x_start) {
        psi = std::exp(C(0, k * x));
        dpsi = C(0, k) * psi;
    }

    // Constant potential v from the current x down to x0 < x.
    void region(double v, double energy, double x0) {
        double h = x - x0;
        C kappa = std::sqrt(C(c * (v - energy), 0));
        C ch, sh_over_kappa, kappa_sh;
        if (std::abs(kappa * h) < 1e-8) {
            ch = 1;
            sh_over_kappa = h;
            kappa_sh = kappa * kappa * h;
        } else {
            ch = std::cosh(kappa * h);
            sh_over_kappa = std::sinh(kappa * h) / kappa;
            kappa_sh = kappa * std::sinh(kappa * h);
        }
        C p = psi * ch - dpsi * sh_over_kappa;
        C d = -psi * kappa_sh + dpsi * ch;
        psi = p;
        dpsi = d;
        x = x0;
    }

    // g delta(x - x_now): psi' jumps by c g psi across the point.
    void delta(double g) {
        dpsi -= c * g * psi;
    }

    // psi = A e^{ikx} + B e^{-ikx} at the current x; returns (R, T).
    std::pair<C, C> amplitudes() const {
        C e = std::exp(C(0, k * x));
        C a = (psi + dpsi / C(0, k)) / (2.0 * e);
        C b = (psi - dpsi / C(0, k)) * e / 2.0;
        return {b / a, 1.0 / a};
    }
};

// Deltas of strength g_j at x_j (any order), units hbar = 1, mass m.
inline std::pair<C, C> deltas_rt(std::vector<double> xs, std::vector<double> gs, double k, double mass = 0.5) {
    const double c = 2 * mass;
    std::vector<std::size_t> order(xs.size());
    for (std::size_t i = 0; i < order.size(); i++) {
        order[i] = i;
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return xs[a] > xs[b]; });
    double right = xs.empty() ? 0 : xs[order.front()];
    Shooter s(c, k, right);
    for (std::size_t i : order) {
        s.region(0, k * k / c, xs[i]);
        s.delta(gs[i]);
    }
    return s.amplitudes();
}

// Rectangular potential v on [x0, x1], hbar = 1, mass m, energy E.
inline std::pair<C, C> box_rt(double v, double x0, double x1, double energy, double mass = 0.5) {
    const double c = 2 * mass;
    const double k = std::sqrt(c * energy);
    Shooter s(c, k, x1);
    s.region(v, energy, x0);
    return s.amplitudes();
}

}  // namespace oracle

#endif
