#ifndef QSCATTER_CLI_COMMANDS_H
#define QSCATTER_CLI_COMMANDS_H

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "qscatter/cli/config.h"
#include "qscatter/potential.h"
#include "qscatter/scattering.h"

namespace qscatter::cli {

inline constexpr const char *kVersion = "0.1.0";
inline constexpr int kCsvVersion = 1;

enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,
    kExitConfig = 2,
    kExitPrecondition = 3,
    kExitTolerance = 4,
};

struct GlobalOptions {
    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    int threads = 1;
    /// scan only; falls back to the `scan.mode` key.
    std::string mode;
};

/// Simulation run resolved from a config file.
struct RunSpec {
    SimulationConfig config;
    std::vector<std::int64_t> k0;
    /// Either an absolute width or a fraction of each K0.
    std::optional<double> sigma_k;
    double sigma_ratio = 0.05;
    double xi0 = -0.25;
    /// nullopt means "auto": steps_for_asymptotic_time per K0.
    std::optional<std::int64_t> steps;
    std::uint64_t shots = 0;
    PotentialShape potential;
    /// Delta given through eta: g = 2 k eta is recomputed for every K0.
    std::optional<double> delta_eta;

    WavePacketSpec packet(std::int64_t k0) const;
    PotentialShape potential_for(std::int64_t k0) const;
    SimulationConfig config_for(std::int64_t k0) const;
};

RunSpec resolve_run(const ConfigFile &cfg, const GlobalOptions &options);

/// Potential block (`potential.*` keys). Table paths resolve against the
/// config file's directory.
PotentialShape resolve_potential(const ConfigFile &cfg);

/// Runs `fn(i)` for i in [0, count) on up to `threads` workers. Callers
/// store results by index, so output order never depends on scheduling.
/// The exception of the lowest failing index is rethrown.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)> &fn);

int cmd_simulate(const ConfigFile &cfg, const GlobalOptions &options, std::ostream &log);
int cmd_oracle(const ConfigFile &cfg, const GlobalOptions &options, std::ostream &log);
int cmd_compare(const ConfigFile &cfg, const GlobalOptions &options, std::ostream &log);
int cmd_scan(const ConfigFile &cfg, const GlobalOptions &options, std::ostream &log);

/// Loads the config, dispatches, and maps exceptions to exit codes.
int run_command(const std::string &command, const GlobalOptions &options, std::ostream &log);

/// Full command-line entry point.
int main_cli(int argc, char **argv);

}  // namespace qscatter::cli

#endif
