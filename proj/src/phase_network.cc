#include "qscatter/phase_network.h"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "qscatter/errors.h"

namespace qscatter {

namespace {

void check_register(int n) {
    if (n < 1 || n > kMaxQubits) {
        throw DomainError("qubit count must be in [1, " + std::to_string(kMaxQubits) + "]");
    }
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

double wrap_phase(double phase) {
    double r = std::remainder(phase, 2 * std::numbers::pi);
    if (r <= -std::numbers::pi) {
        r += 2 * std::numbers::pi;
    }
    return r;
}

PhaseNetwork::PhaseNetwork(int num_qubits) : num_qubits_(num_qubits) {
    check_register(num_qubits);
}

void PhaseNetwork::add(std::vector<Control> controls, int target, double phase) {
    if (!std::isfinite(phase)) {
        throw ValidationError("phase gate angle must be finite");
    }
    if (target < 1 || target > num_qubits_) {
        throw DomainError("phase gate target out of range");
    }
    for (std::size_t a = 0; a < controls.size(); a++) {
        const auto &c = controls[a];
        if (c.qubit < 1 || c.qubit > num_qubits_ || c.qubit == target || (c.bit != 0 && c.bit != 1)) {
            throw DomainError("invalid control on phase gate");
        }
        for (std::size_t b = 0; b < a; b++) {
            if (controls[b].qubit == c.qubit) {
                throw DomainError("duplicate control qubit on phase gate");
            }
        }
    }
    gates_.push_back({std::move(controls), target, wrap_phase(phase)});
}

void PhaseNetwork::apply(QuantumState &state) const {
    if (state.num_qubits() != num_qubits_) {
        throw DomainError("network and state sizes differ");
    }
    for (const auto &g : gates_) {
        state.apply_controlled(g.controls, g.target, SingleQubitGate::phase(g.phase));
    }
}

std::vector<double> PhaseNetwork::diagonal_phases() const {
    const std::size_t size = std::size_t{1} << num_qubits_;
    std::vector<double> phases(size, 0.0);
    auto mask = [this](int q) { return std::uint64_t{1} << (num_qubits_ - q); };
    for (const auto &g : gates_) {
        std::uint64_t cmask = mask(g.target);
        std::uint64_t cval = cmask;
        for (const auto &c : g.controls) {
            cmask |= mask(c.qubit);
            if (c.bit) {
                cval |= mask(c.qubit);
            }
        }
        for (std::size_t j = 0; j < size; j++) {
            if ((j & cmask) == cval) {
                phases[j] += g.phase;
            }
        }
    }
    return phases;
}

std::vector<GateOp> PhaseNetwork::to_circuit() const {
    std::vector<GateOp> ops;
    ops.reserve(gates_.size());
    for (const auto &g : gates_) {
        ops.push_back({g.controls, g.target, SingleQubitGate::phase(g.phase)});
    }
    return ops;
}

std::string PhaseNetwork::to_text() const {
    std::string out = "# qubits " + std::to_string(num_qubits_) + "\n";
    for (const auto &g : gates_) {
        if (g.controls.empty()) {
            out += "-";
        }
        for (std::size_t i = 0; i < g.controls.size(); i++) {
            if (i) {
                out += ",";
            }
            out += std::to_string(g.controls[i].qubit) + ":" + std::to_string(g.controls[i].bit);
        }
        out += " " + std::to_string(g.target) + " " + format_double(g.phase) + "\n";
    }
    return out;
}

PhaseNetwork PhaseNetwork::from_text(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    int n = -1;
    std::vector<PhaseGate> pending;
    auto fail = [&](const std::string &msg) {
        throw ValidationError("phase network line " + std::to_string(line_no) + ": " + msg);
    };
    while (std::getline(in, line)) {
        line_no++;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        if (line[0] == '#') {
            std::istringstream h(line.substr(1));
            std::string key;
            if (h >> key && key == "qubits") {
                if (!(h >> n)) {
                    fail("bad qubit count");
                }
            }
            continue;
        }
        std::istringstream fields(line);
        std::string ctrl;
        PhaseGate g{{}, 0, 0};
        if (!(fields >> ctrl >> g.target >> g.phase)) {
            fail("expected `controls target phase`");
        }
        if (ctrl != "-") {
            std::istringstream cs(ctrl);
            std::string item;
            while (std::getline(cs, item, ',')) {
                auto colon = item.find(':');
                if (colon == std::string::npos) {
                    fail("control must be qubit:bit");
                }
                try {
                    g.controls.push_back({std::stoi(item.substr(0, colon)), std::stoi(item.substr(colon + 1))});
                } catch (const std::exception &) {
                    fail("control must be qubit:bit");
                }
            }
        }
        pending.push_back(std::move(g));
    }
    if (n < 1) {
        throw ValidationError("phase network text lacks a `# qubits N` header");
    }
    PhaseNetwork net(n);
    for (auto &g : pending) {
        net.add(std::move(g.controls), g.target, g.phase);
    }
    return net;
}

PhaseNetwork linear_phase_network(int n, double alpha) {
    PhaseNetwork net(n);
    for (int l = 1; l <= n; l++) {
        net.add({}, l, alpha * std::ldexp(1.0, n - l));
    }
    return net;
}

PhaseNetwork quadratic_phase_network(int n, double alpha) {
    PhaseNetwork net(n);
    for (int l1 = 1; l1 <= n; l1++) {
        for (int l2 = 1; l2 <= n; l2++) {
            double phase = alpha * std::ldexp(1.0, 2 * n - l1 - l2);
            if (l1 == l2) {
                net.add({}, l1, phase);
            } else {
                net.add({Control{l1, 1}}, l2, phase);
            }
        }
    }
    return net;
}

PhaseNetwork kinetic_network(int n, double alpha) {
    PhaseNetwork net(n);
    // Quadratic subroutine on r = k_2..k_n (bit weights 2^{n-q}).
    for (int q1 = 2; q1 <= n; q1++) {
        for (int q2 = 2; q2 <= n; q2++) {
            double phase = alpha * std::ldexp(1.0, 2 * n - q1 - q2);
            if (q1 == q2) {
                net.add({}, q1, phase);
            } else {
                net.add({Control{q1, 1}}, q2, phase);
            }
        }
    }
    // Linear subroutine on k with angle -2^n alpha, controlled by k_1.
    const double beta = -std::ldexp(alpha, n);
    for (int q = 1; q <= n; q++) {
        double phase = beta * std::ldexp(1.0, n - q);
        if (q == 1) {
            net.add({}, 1, phase);
        } else {
            net.add({Control{1, 1}}, q, phase);
        }
    }
    // Remaining constant for k_1 = 1: alpha (2^{2n-2} + 2^{2n-1}).
    net.add({}, 1, 3 * std::ldexp(alpha, 2 * n - 2));
    return net;
}

std::pair<std::uint64_t, std::uint64_t> barrier_support(int n, int ell) {
    check_register(n);
    if (ell < 1 || ell >= n - 1) {
        throw DomainError("barrier exponent ell=" + std::to_string(ell) + " must satisfy 1 <= ell < n-1 = " + std::to_string(n - 1));
    }
    std::uint64_t center = std::uint64_t{1} << (n - 1);
    std::uint64_t half = std::uint64_t{1} << (n - 1 - ell);
    return {center - half, center + half - 1};
}

PhaseNetwork barrier_network(int n, int ell, double phase) {
    barrier_support(n, ell);
    PhaseNetwork net(n);
    // Right half: k_1 = 1 and k_2..k_{ell+1} = 0.
    std::vector<Control> right;
    for (int q = 2; q <= ell + 1; q++) {
        right.push_back({q, 0});
    }
    net.add(std::move(right), 1, phase);
    // Left half: k_1 = 0 and k_2..k_{ell+1} = 1.
    std::vector<Control> left{{1, 0}};
    for (int q = 2; q <= ell; q++) {
        left.push_back({q, 1});
    }
    net.add(std::move(left), ell + 1, phase);
    return net;
}

PhaseNetwork momentum_parity_network(int n) {
    PhaseNetwork net(n);
    net.add({}, n, std::numbers::pi);
    return net;
}

std::int64_t signed_momentum(std::uint64_t k, int n) {
    const std::uint64_t half = std::uint64_t{1} << (n - 1);
    if (k < half) {
        return static_cast<std::int64_t>(k);
    }
    return static_cast<std::int64_t>(k) - static_cast<std::int64_t>(2 * half);
}

void linear_phase(QuantumState &state, double alpha) {
    linear_phase_network(state.num_qubits(), alpha).apply(state);
}

void quadratic_phase(QuantumState &state, double alpha) {
    quadratic_phase_network(state.num_qubits(), alpha).apply(state);
}

void kinetic_gate(QuantumState &state, double alpha) {
    kinetic_network(state.num_qubits(), alpha).apply(state);
}

void potential_gate(QuantumState &state, std::span<const double> u, double theta) {
    if (u.size() != state.size()) {
        throw DomainError("potential sample count " + std::to_string(u.size()) + " does not match register size " + std::to_string(state.size()));
    }
    auto amps = state.amplitudes();
    for (std::size_t j = 0; j < u.size(); j++) {
        if (!std::isfinite(u[j])) {
            throw ValidationError("potential sample " + std::to_string(j) + " is not finite");
        }
    }
    for (std::size_t j = 0; j < u.size(); j++) {
        amps[j] *= std::polar(1.0, wrap_phase(-theta * u[j]));
    }
}

void barrier_network_gate(QuantumState &state, double height, int ell, double theta) {
    barrier_network(state.num_qubits(), ell, -theta * height).apply(state);
}

void momentum_parity_gate(QuantumState &state) {
    momentum_parity_network(state.num_qubits()).apply(state);
}

std::vector<double> linear_phases(int n, double alpha) {
    check_register(n);
    std::vector<double> out(std::size_t{1} << n);
    for (std::size_t j = 0; j < out.size(); j++) {
        out[j] = wrap_phase(alpha * static_cast<double>(j));
    }
    return out;
}

std::vector<double> quadratic_phases(int n, double alpha) {
    check_register(n);
    std::vector<double> out(std::size_t{1} << n);
    for (std::size_t j = 0; j < out.size(); j++) {
        double jj = static_cast<double>(j);
        out[j] = wrap_phase(alpha * jj * jj);
    }
    return out;
}

std::vector<double> kinetic_phases(int n, double alpha) {
    check_register(n);
    std::vector<double> out(std::size_t{1} << n);
    for (std::size_t k = 0; k < out.size(); k++) {
        double kk = static_cast<double>(signed_momentum(k, n));
        out[k] = wrap_phase(alpha * kk * kk);
    }
    return out;
}

}  // namespace qscatter
