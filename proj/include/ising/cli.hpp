#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ising/bench.hpp"
#include "ising/nist.hpp"
#include "ising/observables.hpp"

namespace ising {

// Everything a sweep/run needs; defaults reproduce the reference measurement
// protocol (warmup 1000 MCS, 1000 samples, stride 100, 2048 lanes).
struct RunConfig {
    ModelParams params;
    int side = 64;
    std::vector<double> t_list;  // must end up sorted ascending and non-empty
    Protocol protocol;
    int lane_budget = 2048;
    uint64_t master_seed = 1;
    int workers = 1;
    KernelBackend backend = KernelBackend::Auto;
    std::string out = "sweep.csv";

    void validate() const;  // throws UsageError naming the offending field
};

// Default temperature grid when neither a list nor a range is given.
std::vector<double> default_t_list();

// "a:b:step" -> inclusive ascending grid.
std::vector<double> parse_t_range(const std::string& spec);

Model parse_model(const std::string& name);
KernelBackend parse_backend(const std::string& name);

// Strict JSON config: unknown keys are usage errors; flags override later.
RunConfig config_from_json_text(const std::string& text);

inline constexpr const char* kCsvHeader =
    "L,T,m_signed,m_abs,chi,chi_abs,e_per_spin,se_m,se_chi,n_samples,warmup,stride,seed";

// Pure CSV production (deterministic; identical for any worker count).
std::string sweep_csv(const RunConfig& config);
std::string sweep_metadata_json(const RunConfig& config);

// Writes the CSV plus a "<out>.meta.json" sidecar.
void cmd_sweep(const RunConfig& config);

struct FitReportRow {
    double side, t, chi_abs;
};
// Reads rows back from the sweep CSV schema.
std::vector<FitReportRow> read_sweep_csv(const std::string& path);
// Lorentzian fit per L, then the scaling and Tc fits; JSON text.
std::string cmd_fit(const std::vector<std::string>& csv_paths, int window_half_points = 3);

struct RngTestOutput {
    std::vector<TestResult> results;
    std::string table;
    bool all_pass = false;
};
RngTestOutput cmd_rngtest(Generator generator, uint64_t seed, size_t n_bits, int block_len,
                          const std::string& export_path = "");

// argv-level entry point; returns the process exit code
// (0 ok, 1 usage, 2 runtime failure, 3 test failure under --strict).
int run_cli(int argc, const char* const* argv);

}  // namespace ising
