#include "qscatter/transfer_matrix.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qscatter/errors.h"
#include "qscatter/tolerances.h"

namespace qscatter {

namespace {

constexpr Complex kI{0, 1};

void require_positive_k(double k) {
    if (!(k > 0) || !std::isfinite(k)) {
        throw DomainError("wavenumber must be positive and finite, got " + std::to_string(k));
    }
}

// sinh(z)/z, accurate near z = 0.
Complex sinhc(Complex z) {
    if (std::abs(z) < 1e-4) {
        Complex z2 = z * z;
        return 1.0 + z2 / 6.0 + z2 * z2 / 120.0;
    }
    return std::sinh(z) / z;
}

}  // namespace

double Units::wavenumber(double e) const {
    if (!(e > 0)) {
        throw DomainError("energy must be positive, got " + std::to_string(e));
    }
    return std::sqrt(2 * mass * e) / hbar;
}

double Units::energy(double k) const {
    return hbar * hbar * k * k / (2 * mass);
}

TransferMatrix TransferMatrix::operator*(const TransferMatrix &b) const {
    return {
        m11 * b.m11 + m12 * b.m21,
        m11 * b.m12 + m12 * b.m22,
        m21 * b.m11 + m22 * b.m21,
        m21 * b.m12 + m22 * b.m22,
    };
}

TransferMatrix TransferMatrix::translated(double shift, double k) const {
    // P(-c) M P(c) with P(c) = diag(e^{ikc}, e^{-ikc}).
    Complex p = std::polar(1.0, k * shift);
    return {m11, m12 * std::conj(p) * std::conj(p), m21 * p * p, m22};
}

double SMatrix::unitarity_defect() const {
    Complex a[2][2] = {{s11, s12}, {s21, s22}};
    double worst = 0;
    for (int r = 0; r < 2; r++) {
        for (int c = 0; c < 2; c++) {
            Complex v = a[r][0] * std::conj(a[c][0]) + a[r][1] * std::conj(a[c][1]);
            if (r == c) {
                v -= 1.0;
            }
            worst = std::max(worst, std::abs(v));
        }
    }
    return worst;
}

double delta_eta(double g, double k, const Units &units) {
    require_positive_k(k);
    return units.mass * g / (units.hbar * units.hbar * k);
}

TransferMatrix delta_transfer(double eta, double k, double y) {
    require_positive_k(k);
    Complex e = std::polar(1.0, 2 * k * y);
    return {1.0 + kI * eta, kI * eta * std::conj(e), -kI * eta * e, 1.0 - kI * eta};
}

ScatteringAmplitudes rt_from_transfer(const TransferMatrix &m) {
    if (std::abs(m.m11) == 0 || !std::isfinite(std::abs(m.m11))) {
        throw SingularMatrixError("M11 vanishes: total reflection, transmission amplitude undefined");
    }
    return {m.m21 / m.m11, 1.0 / m.m11};
}

ScatteringAmplitudes time_reversed_rt(const ScatteringAmplitudes &rt) {
    return {std::conj(rt.reflection), std::conj(rt.transmission)};
}

SMatrix s_matrix_from_transfer(const TransferMatrix &m) {
    if (std::abs(m.m11) == 0) {
        throw SingularMatrixError("M11 vanishes");
    }
    Complex inv = 1.0 / m.m11;
    return {m.m21 * inv, m.det() * inv, inv, -m.m12 * inv};
}

SMatrix s_matrix_from_rt(const ScatteringAmplitudes &rt) {
    return {rt.transmission, rt.reflection, rt.reflection, rt.transmission};
}

PhaseShifts phase_shifts_from_rt(const ScatteringAmplitudes &rt) {
    Complex even = rt.transmission + rt.reflection;
    Complex odd = rt.transmission - rt.reflection;
    double tol = kTolerances.phase_shift_symmetry;
    if (std::abs(std::abs(even) - 1) > tol || std::abs(std::abs(odd) - 1) > tol) {
        throw AsymmetryError("|T + R| = " + std::to_string(std::abs(even)) + ", |T - R| = " + std::to_string(std::abs(odd)) +
                             ": amplitudes do not come from a parity-symmetric potential");
    }
    return {std::arg(even) / 2, std::arg(odd) / 2};
}

ScatteringAmplitudes rt_from_phase_shifts(const PhaseShifts &d) {
    Complex e0 = std::polar(1.0, 2 * d.even);
    Complex e1 = std::polar(1.0, 2 * d.odd);
    return {(e0 - e1) / 2.0, (e0 + e1) / 2.0};
}

double optical_theorem_residual(const ScatteringAmplitudes &rt, double k) {
    require_positive_k(k);
    Complex f0 = (rt.transmission - 1.0) / (kI * k);
    Complex fpi = rt.reflection / (kI * k);
    return std::norm(f0) + std::norm(fpi) - 2 * f0.imag() / k;
}

std::vector<double> sample_delta_pulses(const std::function<double(double)> &potential, double a, int pulses, double k,
                                        const Units &units, double center) {
    if (pulses < 1) {
        throw DomainError("pulse count must be >= 1");
    }
    if (!(a > 0)) {
        throw DomainError("potential range must be positive");
    }
    require_positive_k(k);
    std::vector<double> etas(pulses);
    const double step = a / pulses;
    for (int j = 0; j < pulses; j++) {
        double x = center - a / 2 + j * step;
        etas[j] = units.coupling() * step * potential(x) / (2 * k);
    }
    return etas;
}

TransferMatrix compose_transfer_chain(std::span<const double> etas, double k, double a, double center) {
    require_positive_k(k);
    const std::size_t n = etas.size();
    Complex u = std::polar(1.0, k * a / 2);
    TransferMatrix boundary{u, 0, 0, std::conj(u)};
    TransferMatrix m = boundary;
    if (n > 0) {
        Complex d = std::polar(1.0, -k * a / static_cast<double>(n));
        for (double eta : etas) {
            // M0(eta) D
            TransferMatrix step{(1.0 + kI * eta) * d, kI * eta * std::conj(d), -kI * eta * d, (1.0 - kI * eta) * std::conj(d)};
            m = m * step;
        }
    }
    m = m * boundary;
    if (center != 0) {
        m = m.translated(center, k);
    }
    return m;
}

TransferMatrix analytic_barrier_transfer(double v0, double energy, double a, const Units &units) {
    if (!(energy > 0)) {
        throw DomainError("energy must be positive, got " + std::to_string(energy));
    }
    if (!(a > 0)) {
        throw DomainError("barrier width must be positive");
    }
    const double k = units.wavenumber(energy);
    // kappa^2 = 2m (V0 - E)/hbar^2; imaginary kappa continues to E > V0.
    const Complex kappa = std::sqrt(Complex(units.coupling() * (v0 - energy), 0));
    const Complex s = a * sinhc(kappa * a);  // sinh(kappa a)/kappa
    const Complex c = std::cosh(kappa * a);
    const Complex k2 = kappa * kappa;
    const Complex eps_minus_sinh = k2 * s / k - k * s;
    const Complex eps_plus_sinh = k2 * s / k + k * s;
    const Complex phase = std::polar(1.0, k * a);
    return {
        (c + 0.5 * kI * eps_minus_sinh) * phase,
        0.5 * kI * eps_plus_sinh,
        -0.5 * kI * eps_plus_sinh,
        (c - 0.5 * kI * eps_minus_sinh) * std::conj(phase),
    };
}

TransferMatrix oracle_transfer(const PotentialShape &shape, double energy, OracleMethod method, int pulses, const Units &units) {
    shape.validate();
    const double k = units.wavenumber(energy);
    switch (shape.kind) {
        case PotentialKind::Zero:
            return TransferMatrix::identity();
        case PotentialKind::Delta:
            return delta_transfer(delta_eta(shape.strength, k, units), k, shape.center);
        case PotentialKind::Barrier:
        case PotentialKind::Well:
            if (method == OracleMethod::Analytic) {
                double v0 = shape.kind == PotentialKind::Barrier ? shape.strength : -shape.strength;
                return analytic_barrier_transfer(v0, energy, shape.width, units).translated(shape.center, k);
            }
            break;
        case PotentialKind::Custom:
            break;
    }
    auto [lo, hi] = shape.support();
    double a = hi - lo;
    double center = (lo + hi) / 2;
    auto etas = sample_delta_pulses([&shape](double x) { return shape.value(x); }, a, pulses, k, units, center);
    return compose_transfer_chain(etas, k, a, center);
}

void flag_extrema(std::vector<ScanRow> &rows) {
    for (std::size_t i = 0; i < rows.size(); i++) {
        rows[i].extremum = 0;
        if (i == 0 || i + 1 == rows.size()) {
            continue;
        }
        double prev = rows[i - 1].transmission_probability;
        double cur = rows[i].transmission_probability;
        double next = rows[i + 1].transmission_probability;
        if (cur > prev && cur > next) {
            rows[i].extremum = 1;
        } else if (cur < prev && cur < next) {
            rows[i].extremum = -1;
        }
    }
}

namespace {

ScanRow scan_row(double parameter, const TransferMatrix &m) {
    auto rt = rt_from_transfer(m);
    return {parameter, std::norm(rt.transmission), std::norm(rt.reflection), std::arg(rt.transmission), std::arg(rt.reflection), 0};
}

}  // namespace

std::vector<ScanRow> transmission_scan(const PotentialShape &shape, std::span<const double> energies, int pulses, const Units &units) {
    std::vector<ScanRow> rows;
    rows.reserve(energies.size());
    for (double e : energies) {
        rows.push_back(scan_row(e, oracle_transfer(shape, e, OracleMethod::PulseChain, pulses, units)));
    }
    flag_extrema(rows);
    return rows;
}

std::vector<ScanRow> transmission_scan_strength(const PotentialShape &shape, std::span<const double> strengths, double energy,
                                                int pulses, const Units &units) {
    std::vector<ScanRow> rows;
    rows.reserve(strengths.size());
    for (double s : strengths) {
        PotentialShape p = shape;
        p.strength = s;
        rows.push_back(scan_row(s, oracle_transfer(p, energy, OracleMethod::PulseChain, pulses, units)));
    }
    flag_extrema(rows);
    return rows;
}

}  // namespace qscatter
