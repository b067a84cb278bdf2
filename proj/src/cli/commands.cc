#include "qscatter/cli/commands.h"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <numbers>
#include <numeric>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "qscatter/errors.h"
#include "qscatter/reference.h"
#include "qscatter/transfer_matrix.h"

namespace qscatter::cli {

namespace {

constexpr double kPi = std::numbers::pi;

using Json = nlohmann::ordered_json;

const std::vector<std::string> kKnownKeys = {
    "n",      "gamma",      "dtau",  "n_tau",         "epsilon", "seed",    "shots",    "K0",      "sigma_K",
    "sigma_K_ratio", "xi0", "energy", "k", "phase_shifts", "potential.", "tolerance.", "scan.", "grid.", "oracle.", "units.",
};

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string hex64(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

double wrap_angle(double a) {
    a = std::remainder(a, 2 * kPi);
    return a <= -kPi ? a + 2 * kPi : a;
}

std::filesystem::path output_path(const GlobalOptions &options, const std::string &name) {
    std::filesystem::path dir(options.out_dir.empty() ? "." : options.out_dir);
    std::filesystem::create_directories(dir);
    return dir / name;
}

void write_file(const std::filesystem::path &path, const std::string &content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << content;
}

std::string csv_header(const std::string &command, const std::vector<std::string> &columns) {
    std::string out = "# qscatter " + command + " csv v" + std::to_string(kCsvVersion) + "\n";
    for (std::size_t i = 0; i < columns.size(); i++) {
        out += (i ? "," : "") + columns[i];
    }
    return out + "\n";
}

ConfigFile effective_config(const ConfigFile &cfg, const GlobalOptions &options) {
    ConfigFile out = cfg;
    if (options.seed) {
        out.set("seed", std::to_string(*options.seed));
    }
    return out;
}

void write_manifest(const GlobalOptions &options, const std::string &command, const ConfigFile &cfg,
                    const std::vector<std::filesystem::path> &outputs, double seconds, const Json &extra = Json::object()) {
    Json m;
    m["command"] = command;
    m["tool_version"] = kVersion;
    m["csv_version"] = kCsvVersion;
    Json config = Json::object();
    for (const auto &[k, v] : cfg.values()) {
        config[k] = v;
    }
    m["config"] = config;
    m["config_hash"] = "fnv1a64:" + hex64(fnv1a(cfg.canonical_text()));
    m["seed"] = cfg.get_int("seed", 0);
    m["threads"] = options.threads;
    Json outs = Json::array();
    for (const auto &p : outputs) {
        outs.push_back(p.string());
    }
    m["outputs"] = outs;
    m["wall_seconds"] = seconds;
    for (auto it = extra.begin(); it != extra.end(); ++it) {
        m[it.key()] = it.value();
    }
    write_file(output_path(options, command + ".manifest.json"), m.dump(2) + "\n");
}

std::vector<double> resolve_grid(const ConfigFile &cfg) {
    if (cfg.has("grid.values")) {
        return cfg.get_double_list("grid.values");
    }
    double start = cfg.get_double("grid.start");
    double stop = cfg.get_double("grid.stop");
    std::int64_t count = cfg.get_int("grid.count");
    if (count < 1) {
        cfg.fail("grid.count", "must be >= 1");
    }
    std::vector<double> out(static_cast<std::size_t>(count));
    for (std::int64_t i = 0; i < count; i++) {
        out[static_cast<std::size_t>(i)] = count == 1 ? start : start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1);
    }
    return out;
}

Units resolve_units(const ConfigFile &cfg) {
    Units u;
    u.hbar = cfg.get_double("units.hbar", 1.0);
    u.mass = cfg.get_double("units.mass", 0.5);
    if (!(u.hbar > 0)) {
        cfg.fail("units.hbar", "must be positive");
    }
    if (!(u.mass > 0)) {
        cfg.fail("units.mass", "must be positive");
    }
    return u;
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

}  // namespace

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)> &fn) {
    std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), std::max<std::size_t>(count, 1));
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; w++) {
            pool.emplace_back(work);
        }
        for (auto &t : pool) {
            t.join();
        }
    }
    for (auto &e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

PotentialShape resolve_potential(const ConfigFile &cfg) {
    PotentialKind kind;
    try {
        kind = parse_potential_kind(cfg.get_string("potential.kind"));
    } catch (const ConfigError &) {
        throw;
    } catch (const std::exception &e) {
        cfg.fail("potential.kind", e.what());
    }
    const double center = cfg.get_double("potential.center", 0.0);
    auto width = [&cfg] {
        if (cfg.has("potential.width")) {
            return cfg.get_double("potential.width");
        }
        if (cfg.has("potential.exponent")) {
            std::int64_t ell = cfg.get_int("potential.exponent");
            if (ell < 1) {
                cfg.fail("potential.exponent", "must be >= 1");
            }
            return std::ldexp(1.0, -static_cast<int>(ell));
        }
        return cfg.get_double("potential.width");
    };
    PotentialShape shape;
    switch (kind) {
        case PotentialKind::Zero:
            shape = PotentialShape::zero();
            break;
        case PotentialKind::Delta:
            if (cfg.has("potential.strength") && cfg.has("potential.eta")) {
                cfg.fail("potential.eta", "give either potential.strength or potential.eta, not both");
            }
            {
                // An eta or strength grid supplies the coupling point by point.
                std::string variable = cfg.get_string("grid.variable", "");
                bool from_grid = variable == "eta" || variable == "strength";
                double g = cfg.has("potential.eta") || (from_grid && !cfg.has("potential.strength"))
                               ? 0.0
                               : cfg.get_double("potential.strength");
                shape = PotentialShape::delta(g, center);
            }
            break;
        case PotentialKind::Barrier:
            shape = PotentialShape::barrier(cfg.get_double("potential.height"), width(), center);
            break;
        case PotentialKind::Well:
            shape = PotentialShape::well(cfg.get_double("potential.depth"), width(), center);
            break;
        case PotentialKind::Custom: {
            std::filesystem::path table(cfg.get_string("potential.table"));
            if (table.is_relative() && !cfg.base_dir().empty()) {
                table = std::filesystem::path(cfg.base_dir()) / table;
            }
            try {
                shape = PotentialShape::custom(TabulatedPotential::load(table.string()));
            } catch (const std::exception &e) {
                cfg.fail("potential.table", e.what());
            }
            break;
        }
    }
    try {
        shape.validate();
    } catch (const std::exception &e) {
        cfg.fail("potential.kind", e.what());
    }
    return shape;
}

WavePacketSpec RunSpec::packet(std::int64_t k) const {
    return {k, sigma_k ? *sigma_k : sigma_ratio * static_cast<double>(k), xi0};
}

PotentialShape RunSpec::potential_for(std::int64_t k) const {
    PotentialShape p = potential;
    if (delta_eta) {
        // eta = m g / (hbar^2 k) with hbar = 2m = 1 and k = 2 pi K0.
        p.strength = 2 * (2 * kPi * static_cast<double>(k)) * *delta_eta;
    }
    return p;
}

SimulationConfig RunSpec::config_for(std::int64_t k) const {
    SimulationConfig c = config;
    c.steps = steps ? *steps : steps_for_asymptotic_time(config, packet(k));
    return c;
}

RunSpec resolve_run(const ConfigFile &cfg, const GlobalOptions &options) {
    cfg.check_known(kKnownKeys);
    RunSpec spec;
    std::int64_t n = cfg.get_int("n");
    if (n < 1 || n > kMaxQubits) {
        cfg.fail("n", "must lie in [1, " + std::to_string(kMaxQubits) + "]");
    }
    spec.config.num_qubits = static_cast<int>(n);
    spec.config.gamma = cfg.get_double("gamma");
    if (!(spec.config.gamma > 0) || !std::isfinite(spec.config.gamma)) {
        cfg.fail("gamma", "must be positive");
    }
    spec.config.dtau = cfg.get_double("dtau");
    if (!(spec.config.dtau > 0) || !std::isfinite(spec.config.dtau)) {
        cfg.fail("dtau", "must be positive");
    }
    spec.config.epsilon = cfg.get_double("epsilon", 1e-10);
    if (!(spec.config.epsilon >= 0 && spec.config.epsilon < 1)) {
        cfg.fail("epsilon", "must lie in [0, 1)");
    }
    std::int64_t seed = cfg.get_int("seed", 0);
    if (seed < 0) {
        cfg.fail("seed", "must be >= 0");
    }
    spec.config.seed = options.seed ? *options.seed : static_cast<std::uint64_t>(seed);
    if (cfg.has("n_tau") && cfg.get_string("n_tau") != "auto") {
        std::int64_t steps = cfg.get_int("n_tau");
        if (steps < 1) {
            cfg.fail("n_tau", "must be >= 1 or 'auto'");
        }
        spec.steps = steps;
    }
    std::int64_t shots = cfg.get_int("shots", 0);
    if (shots < 0) {
        cfg.fail("shots", "must be >= 0");
    }
    spec.shots = static_cast<std::uint64_t>(shots);
    spec.k0 = cfg.get_int_list("K0");
    const std::int64_t half = std::int64_t{1} << (n - 1);
    for (auto k : spec.k0) {
        if (k <= 0 || k >= half) {
            cfg.fail("K0", "each K0 must satisfy 0 < K0 < 2^(n-1) = " + std::to_string(half));
        }
    }
    if (cfg.has("sigma_K") && cfg.has("sigma_K_ratio")) {
        cfg.fail("sigma_K_ratio", "give either sigma_K or sigma_K_ratio, not both");
    }
    if (cfg.has("sigma_K")) {
        spec.sigma_k = cfg.get_double("sigma_K");
        if (!(*spec.sigma_k >= 0)) {
            cfg.fail("sigma_K", "must be >= 0");
        }
    }
    spec.sigma_ratio = cfg.get_double("sigma_K_ratio", 0.05);
    if (!(spec.sigma_ratio >= 0)) {
        cfg.fail("sigma_K_ratio", "must be >= 0");
    }
    spec.xi0 = cfg.get_double("xi0", -0.25);
    if (!(spec.xi0 >= -0.5 && spec.xi0 < 0.5)) {
        cfg.fail("xi0", "must lie in [-1/2, 1/2)");
    }
    spec.potential = resolve_potential(cfg);
    if (spec.potential.kind == PotentialKind::Delta && cfg.has("potential.eta")) {
        spec.delta_eta = cfg.get_double("potential.eta");
    }
    return spec;
}

int cmd_simulate(const ConfigFile &raw, const GlobalOptions &options, std::ostream &log) {
    Timer timer;
    ConfigFile cfg = effective_config(raw, options);
    RunSpec spec = resolve_run(cfg, options);
    std::vector<SimulationResult> results;
    results.reserve(spec.k0.size());
    std::vector<std::optional<SimulationResult>> slots(spec.k0.size());
    parallel_for(spec.k0.size(), options.threads, [&](std::size_t i) {
        std::int64_t k = spec.k0[i];
        SimulationConfig c = spec.config_for(k);
        // Z and X shot streams use seed and seed + 1.
        c.seed = spec.config.seed + 2 * i;
        slots[i] = run_simulation(c, spec.packet(k), spec.potential_for(k), spec.shots);
    });

    std::string csv = csv_header("simulate", {"K0", "P_refl", "P_trans", "Re_R", "Im_R", "Re_T", "Im_T", "method", "shots", "seed"});
    auto row = [&csv](std::int64_t k, const ScatteringEstimate &e) {
        csv += std::to_string(k) + "," + num(e.p_reflect) + "," + num(e.p_transmit) + "," + num(e.reflection.real()) + "," +
               num(e.reflection.imag()) + "," + num(e.transmission.real()) + "," + num(e.transmission.imag()) + "," +
               estimate_method_name(e.method) + "," + std::to_string(e.shots) + "," + std::to_string(e.seed) + "\n";
    };
    Json extra;
    extra["rows"] = Json::array();
    for (std::size_t i = 0; i < slots.size(); i++) {
        const SimulationResult &r = *slots[i];
        row(spec.k0[i], r.exact);
        Json info;
        info["K0"] = spec.k0[i];
        info["tau"] = r.tau;
        info["steps"] = spec.config_for(spec.k0[i]).steps;
        if (r.shots) {
            row(spec.k0[i], *r.shots);
            info["x_mean"] = r.shots->x_mean;
            info["x_stderr"] = r.shots->x_stderr;
            info["p_reflect_stderr"] = r.shots->p_reflect_stderr;
        }
        extra["rows"].push_back(info);
        log << "K0=" << spec.k0[i] << " P_refl=" << num(r.exact.p_reflect) << " |R|=" << num(std::abs(r.exact.reflection))
            << " |T|=" << num(std::abs(r.exact.transmission)) << "\n";
    }
    auto path = output_path(options, "simulate.csv");
    write_file(path, csv);
    write_manifest(options, "simulate", cfg, {path}, timer.seconds(), extra);
    return kExitOk;
}

int cmd_oracle(const ConfigFile &raw, const GlobalOptions &options, std::ostream &log) {
    Timer timer;
    ConfigFile cfg = effective_config(raw, options);
    cfg.check_known(kKnownKeys);
    const Units units = resolve_units(cfg);
    PotentialShape shape = resolve_potential(cfg);
    const std::string variable = cfg.get_string("grid.variable", "energy");
    if (variable != "energy" && variable != "k" && variable != "eta" && variable != "strength") {
        cfg.fail("grid.variable", "must be one of energy, k, eta, strength");
    }
    const std::vector<double> grid = resolve_grid(cfg);
    const std::string method_name = cfg.get_string("oracle.method", "analytic");
    if (method_name != "analytic" && method_name != "chain") {
        cfg.fail("oracle.method", "must be analytic or chain");
    }
    const OracleMethod method = method_name == "chain" ? OracleMethod::PulseChain : OracleMethod::Analytic;
    const std::int64_t pulses = cfg.get_int("oracle.pulses", 1000);
    if (pulses < 1) {
        cfg.fail("oracle.pulses", "must be >= 1");
    }
    const bool want_shifts = cfg.get_bool("phase_shifts", false);
    const std::optional<double> eta = cfg.has("potential.eta") ? std::optional(cfg.get_double("potential.eta")) : std::nullopt;
    if (variable == "eta" && shape.kind != PotentialKind::Delta) {
        cfg.fail("grid.variable", "an eta grid needs potential.kind = delta");
    }
    double fixed_energy = 0;
    if (variable == "eta" || variable == "strength") {
        if (cfg.has("k")) {
            fixed_energy = units.energy(cfg.get_double("k"));
        } else {
            fixed_energy = cfg.get_double("energy");
        }
        if (!(fixed_energy > 0)) {
            cfg.fail(cfg.has("k") ? "k" : "energy", "must be positive");
        }
    }
    for (double v : grid) {
        if ((variable == "energy" || variable == "k") && !(v > 0)) {
            cfg.fail("grid.values", "energies and wavenumbers must be positive");
        }
    }
    if (want_shifts && !shape.is_symmetric()) {
        throw AsymmetryError("phase shifts requested but the potential is not parity symmetric about x = 0");
    }

    struct Row {
        double energy, k;
        ScatteringAmplitudes rt;
        std::optional<PhaseShifts> shifts;
        double residual;
    };
    std::vector<Row> rows(grid.size());
    parallel_for(grid.size(), options.threads, [&](std::size_t i) {
        const double v = grid[i];
        double energy = variable == "energy" ? v : variable == "k" ? units.energy(v) : fixed_energy;
        double k = units.wavenumber(energy);
        PotentialShape p = shape;
        TransferMatrix m;
        if (variable == "eta") {
            m = delta_transfer(v, k, shape.center);
        } else {
            if (variable == "strength") {
                p.strength = v;
            } else if (eta && p.kind == PotentialKind::Delta) {
                p.strength = *eta * units.hbar * units.hbar * k / units.mass;
            }
            m = oracle_transfer(p, energy, method, static_cast<int>(pulses), units);
        }
        Row r{energy, k, rt_from_transfer(m), std::nullopt, 0};
        if (want_shifts) {
            r.shifts = phase_shifts_from_rt(r.rt);
        }
        r.residual = optical_theorem_residual(r.rt, k);
        rows[i] = r;
    });

    std::string csv = csv_header("oracle", {"parameter", "energy", "k", "Re_R", "Im_R", "Re_T", "Im_T", "abs_T2", "abs_R2", "delta0",
                                            "delta1", "optical_residual"});
    for (std::size_t i = 0; i < rows.size(); i++) {
        const Row &r = rows[i];
        csv += num(grid[i]) + "," + num(r.energy) + "," + num(r.k) + "," + num(r.rt.reflection.real()) + "," +
               num(r.rt.reflection.imag()) + "," + num(r.rt.transmission.real()) + "," + num(r.rt.transmission.imag()) + "," +
               num(std::norm(r.rt.transmission)) + "," + num(std::norm(r.rt.reflection)) + "," +
               (r.shifts ? num(r.shifts->even) : "nan") + "," + (r.shifts ? num(r.shifts->odd) : "nan") + "," + num(r.residual) +
               "\n";
    }
    auto path = output_path(options, "oracle.csv");
    write_file(path, csv);
    write_manifest(options, "oracle", cfg, {path}, timer.seconds());
    log << "oracle: " << rows.size() << " grid points\n";
    return kExitOk;
}

int cmd_compare(const ConfigFile &raw, const GlobalOptions &options, std::ostream &log) {
    Timer timer;
    ConfigFile cfg = effective_config(raw, options);
    RunSpec spec = resolve_run(cfg, options);
    const double tol_mod = cfg.get_double("tolerance.modulus", 0.02);
    const double tol_phase = cfg.get_double("tolerance.phase", 0.05);
    if (!(tol_mod > 0)) {
        cfg.fail("tolerance.modulus", "must be positive");
    }
    if (!(tol_phase > 0)) {
        cfg.fail("tolerance.phase", "must be positive");
    }

    struct Row {
        ScatteringEstimate sim;
        ScatteringAmplitudes oracle;
    };
    std::vector<Row> rows(spec.k0.size());
    parallel_for(spec.k0.size(), options.threads, [&](std::size_t i) {
        std::int64_t k = spec.k0[i];
        SimulationConfig c = spec.config_for(k);
        PotentialShape p = spec.potential_for(k);
        SimulationResult r = run_simulation(c, spec.packet(k), p, 0);
        rows[i] = {r.exact, simulation_oracle(c, p, k)};
    });

    // Modulus deltas are relative to the oracle modulus (absolute when it
    // vanishes); phase deltas are skipped where the oracle amplitude vanishes.
    auto modulus_delta = [](Complex sim, Complex ref) {
        double d = std::abs(std::abs(sim) - std::abs(ref));
        return std::abs(ref) > 1e-9 ? d / std::abs(ref) : d;
    };
    auto phase_delta = [](Complex sim, Complex ref) -> std::optional<double> {
        if (std::abs(ref) <= 1e-9) {
            return std::nullopt;
        }
        return std::abs(wrap_angle(std::arg(sim) - std::arg(ref)));
    };
    auto amp = [](Complex z) {
        Json j;
        j["modulus"] = std::abs(z);
        j["phase"] = std::arg(z);
        return j;
    };

    Json report;
    report["tolerances"] = {{"modulus_relative", tol_mod}, {"phase_rad", tol_phase}};
    report["cases"] = Json::array();
    bool all_pass = true;
    for (std::size_t i = 0; i < rows.size(); i++) {
        const Row &r = rows[i];
        double dr = modulus_delta(r.sim.reflection, r.oracle.reflection);
        double dt = modulus_delta(r.sim.transmission, r.oracle.transmission);
        auto pr = phase_delta(r.sim.reflection, r.oracle.reflection);
        auto pt = phase_delta(r.sim.transmission, r.oracle.transmission);
        bool pass = dr <= tol_mod && dt <= tol_mod && (!pr || *pr <= tol_phase) && (!pt || *pt <= tol_phase);
        all_pass = all_pass && pass;
        Json c;
        c["K0"] = spec.k0[i];
        c["simulation"] = {{"R", amp(r.sim.reflection)}, {"T", amp(r.sim.transmission)}, {"P_refl", r.sim.p_reflect},
                           {"P_trans", r.sim.p_transmit}};
        c["oracle"] = {{"R", amp(r.oracle.reflection)}, {"T", amp(r.oracle.transmission)}};
        c["delta"] = {{"modulus_R", dr}, {"modulus_T", dt}, {"phase_R", pr ? Json(*pr) : Json()}, {"phase_T", pt ? Json(*pt) : Json()}};
        c["pass"] = pass;
        report["cases"].push_back(c);
        log << "K0=" << spec.k0[i] << " d|R|=" << num(dr) << " d|T|=" << num(dt) << " dargR=" << (pr ? num(*pr) : "n/a")
            << " dargT=" << (pt ? num(*pt) : "n/a") << (pass ? " pass" : " FAIL") << "\n";
    }
    report["pass"] = all_pass;
    auto path = output_path(options, "compare.json");
    write_file(path, report.dump(2) + "\n");
    write_manifest(options, "compare", cfg, {path}, timer.seconds(), Json{{"pass", all_pass}});
    return all_pass ? kExitOk : kExitTolerance;
}

namespace {

int scan_resonance(const ConfigFile &cfg, const GlobalOptions &options, std::ostream &log, std::vector<std::filesystem::path> &outputs) {
    const Units units = resolve_units(cfg);
    PotentialShape shape = resolve_potential(cfg);
    const std::string variable = cfg.get_string("grid.variable", "energy");
    if (variable != "energy" && variable != "strength") {
        cfg.fail("grid.variable", "resonance scans run over energy or strength");
    }
    const std::vector<double> grid = resolve_grid(cfg);
    const std::int64_t pulses = cfg.get_int("scan.pulses", 1000);
    if (pulses < 1) {
        cfg.fail("scan.pulses", "must be >= 1");
    }
    const double energy = variable == "strength" ? cfg.get_double("energy") : 0;
    std::vector<ScanRow> rows(grid.size());
    parallel_for(grid.size(), options.threads, [&](std::size_t i) {
        std::vector<double> one{grid[i]};
        auto r = variable == "energy" ? transmission_scan(shape, one, static_cast<int>(pulses), units)
                                      : transmission_scan_strength(shape, one, energy, static_cast<int>(pulses), units);
        rows[i] = r[0];
    });
    flag_extrema(rows);
    std::string csv = csv_header("scan resonance", {"parameter", "abs_T2", "abs_R2", "arg_T", "arg_R", "resonance_flag"});
    for (const auto &r : rows) {
        csv += num(r.parameter) + "," + num(r.transmission_probability) + "," + num(r.reflection_probability) + "," +
               num(r.arg_transmission) + "," + num(r.arg_reflection) + "," + std::to_string(r.extremum) + "\n";
    }
    auto path = output_path(options, "scan-resonance.csv");
    write_file(path, csv);
    outputs.push_back(path);
    log << "resonance: " << rows.size() << " grid points\n";
    return kExitOk;
}

int scan_pulse_convergence(const ConfigFile &cfg, const GlobalOptions &options, std::ostream &log,
                           std::vector<std::filesystem::path> &outputs) {
    const Units units = resolve_units(cfg);
    PotentialShape shape = resolve_potential(cfg);
    if (shape.kind != PotentialKind::Barrier && shape.kind != PotentialKind::Well) {
        cfg.fail("potential.kind", "pulse convergence needs a barrier or well");
    }
    const double energy = cfg.get_double("energy");
    if (!(energy > 0)) {
        cfg.fail("energy", "must be positive");
    }
    std::vector<std::int64_t> counts = cfg.has("scan.pulses") ? cfg.get_int_list("scan.pulses") : std::vector<std::int64_t>{25, 50, 100, 200};
    for (auto c : counts) {
        if (c < 1) {
            cfg.fail("scan.pulses", "pulse counts must be >= 1");
        }
    }
    auto exact = rt_from_transfer(oracle_transfer(shape, energy, OracleMethod::Analytic, 1, units));
    std::vector<std::array<double, 4>> errs(counts.size());
    parallel_for(counts.size(), options.threads, [&](std::size_t i) {
        auto rt = rt_from_transfer(oracle_transfer(shape, energy, OracleMethod::PulseChain, static_cast<int>(counts[i]), units));
        errs[i] = {std::abs(std::abs(rt.reflection) - std::abs(exact.reflection)),
                   std::abs(wrap_angle(std::arg(rt.reflection) - std::arg(exact.reflection))),
                   std::abs(std::abs(rt.transmission) - std::abs(exact.transmission)),
                   std::abs(wrap_angle(std::arg(rt.transmission) - std::arg(exact.transmission)))};
    });
    std::string csv = csv_header("scan pulse-convergence", {"pulses", "err_abs_R", "err_arg_R", "err_abs_T", "err_arg_T"});
    for (std::size_t i = 0; i < counts.size(); i++) {
        csv += std::to_string(counts[i]) + "," + num(errs[i][0]) + "," + num(errs[i][1]) + "," + num(errs[i][2]) + "," +
               num(errs[i][3]) + "\n";
    }
    auto path = output_path(options, "scan-pulse-convergence.csv");
    write_file(path, csv);
    outputs.push_back(path);
    log << "pulse-convergence: " << counts.size() << " pulse counts\n";
    return kExitOk;
}

int scan_trotter_convergence(const ConfigFile &cfg, const GlobalOptions &options, std::ostream &log,
                             std::vector<std::filesystem::path> &outputs, nlohmann::ordered_json &extra) {
    RunSpec spec = resolve_run(cfg, options);
    if (spec.config.num_qubits > 10) {
        cfg.fail("n", "trotter-convergence compares against a dense 2^n x 2^n oracle; use n <= 10");
    }
    const std::int64_t halvings = cfg.get_int("scan.halvings", 4);
    if (halvings < 1 || halvings > 20) {
        cfg.fail("scan.halvings", "must lie in [1, 20]");
    }
    const std::int64_t k0 = spec.k0.front();
    WavePacketSpec packet = spec.packet(k0);
    SimulationConfig base = spec.config;
    // Default horizon: half the asymptotic time, so the evolution ends with
    // the packet on the potential.
    double tau = cfg.has("scan.tau") ? cfg.get_double("scan.tau") : asymptotic_time(base, packet) / 2;
    if (!(tau > 0)) {
        cfg.fail("scan.tau", "must be positive");
    }
    const std::int64_t steps0 = std::max<std::int64_t>(1, std::llround(tau / base.dtau));
    tau = static_cast<double>(steps0) * base.dtau;
    PotentialShape shape = spec.potential_for(k0);
    PotentialSpec potential = sample_potential(base, shape);
    QuantumState psi0 = prepare_packet(base, packet);
    auto exact = reference::dense_evolve(psi0.amplitudes(), potential.samples, base.gamma, tau);

    const std::size_t points = static_cast<std::size_t>(halvings) + 1;
    std::vector<double> dts(points), errors(points);
    std::vector<std::int64_t> steps(points);
    parallel_for(points, options.threads, [&](std::size_t i) {
        SimulationConfig c = base;
        c.dtau = base.dtau / std::ldexp(1.0, static_cast<int>(i));
        c.steps = steps0 << i;
        QuantumState psi = trotter_evolve(psi0, c, potential);
        dts[i] = c.dtau;
        steps[i] = c.steps;
        errors[i] = std::sqrt(std::transform_reduce(psi.amplitudes().begin(), psi.amplitudes().end(), exact.begin(), 0.0,
                                                    std::plus<>(), [](Amplitude a, Amplitude b) { return std::norm(a - b); }));
    });
    // Least-squares slope of log error against log dtau.
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < points; i++) {
        mx += std::log(dts[i]) / static_cast<double>(points);
        my += std::log(errors[i]) / static_cast<double>(points);
    }
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < points; i++) {
        double dx = std::log(dts[i]) - mx;
        sxy += dx * (std::log(errors[i]) - my);
        sxx += dx * dx;
    }
    double slope = sxy / sxx;
    std::string csv = csv_header("scan trotter-convergence", {"dtau", "steps", "state_error"});
    for (std::size_t i = 0; i < points; i++) {
        csv += num(dts[i]) + "," + std::to_string(steps[i]) + "," + num(errors[i]) + "\n";
    }
    auto path = output_path(options, "scan-trotter-convergence.csv");
    write_file(path, csv);
    outputs.push_back(path);
    extra["tau"] = tau;
    extra["slope"] = slope;
    log << "trotter-convergence: log-log slope " << num(slope) << "\n";
    return kExitOk;
}

}  // namespace

int cmd_scan(const ConfigFile &raw, const GlobalOptions &options, std::ostream &log) {
    Timer timer;
    ConfigFile cfg = effective_config(raw, options);
    cfg.check_known(kKnownKeys);
    std::string mode = options.mode.empty() ? cfg.get_string("scan.mode") : options.mode;
    std::vector<std::filesystem::path> outputs;
    Json extra;
    extra["mode"] = mode;
    int code;
    if (mode == "resonance") {
        code = scan_resonance(cfg, options, log, outputs);
    } else if (mode == "pulse-convergence") {
        code = scan_pulse_convergence(cfg, options, log, outputs);
    } else if (mode == "trotter-convergence") {
        code = scan_trotter_convergence(cfg, options, log, outputs, extra);
    } else {
        if (options.mode.empty()) {
            cfg.fail("scan.mode", "unknown mode '" + mode + "' (resonance, pulse-convergence, trotter-convergence)");
        }
        throw ConfigError("--mode", 0, "unknown mode '" + mode + "' (resonance, pulse-convergence, trotter-convergence)");
    }
    write_manifest(options, "scan-" + mode, cfg, outputs, timer.seconds(), extra);
    return code;
}

int run_command(const std::string &command, const GlobalOptions &options, std::ostream &log) {
    try {
        ConfigFile cfg = ConfigFile::load(options.config_path);
        if (command == "simulate") {
            return cmd_simulate(cfg, options, log);
        }
        if (command == "oracle") {
            return cmd_oracle(cfg, options, log);
        }
        if (command == "compare") {
            return cmd_compare(cfg, options, log);
        }
        if (command == "scan") {
            return cmd_scan(cfg, options, log);
        }
        log << "error: unknown command '" << command << "'\n";
        return kExitUsage;
    } catch (const ConfigError &e) {
        log << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const PreconditionError &e) {
        log << "precondition error: " << e.what() << "\n";
        return kExitPrecondition;
    } catch (const ValidationError &e) {
        log << "precondition error: " << e.what() << "\n";
        return kExitPrecondition;
    } catch (const DomainError &e) {
        log << "precondition error: " << e.what() << "\n";
        return kExitPrecondition;
    } catch (const SingularMatrixError &e) {
        log << "precondition error: " << e.what() << "\n";
        return kExitPrecondition;
    } catch (const UndefinedPhaseError &e) {
        log << "precondition error: " << e.what() << "\n";
        return kExitPrecondition;
    }
}

int main_cli(int argc, char **argv) {
    CLI::App app{"Digital quantum scattering simulator and transfer-matrix oracle"};
    app.set_version_flag("--version", kVersion);
    GlobalOptions options;
    std::uint64_t seed = 0;
    app.add_option("--config", options.config_path, "Run descriptor (key = value text or JSON)")->required();
    app.add_option("--out", options.out_dir, "Output directory");
    auto *seed_opt = app.add_option("--seed", seed, "Override the config seed");
    app.add_option("--threads", options.threads, "Worker threads for K0 and grid sweeps")->check(CLI::Range(1, 1024));
    app.require_subcommand(1);
    app.add_subcommand("simulate", "prepare -> Trotter evolution -> momentum readout for each K0");
    app.add_subcommand("oracle", "transfer-matrix R, T, phase shifts and optical-theorem residual over a grid");
    app.add_subcommand("compare", "simulation vs oracle report with pass/fail (exit 4 on failure)");
    auto *scan = app.add_subcommand("scan", "convergence and resonance scans");
    scan->add_option("--mode", options.mode, "resonance | pulse-convergence | trotter-convergence");
    app.fallthrough();
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }
    if (seed_opt->count()) {
        options.seed = seed;
    }
    return run_command(app.get_subcommands().front()->get_name(), options, std::cerr);
}

}  // namespace qscatter::cli
