#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ising/kernel.hpp"
#include "ising/lattice.hpp"

namespace ising {

// Measurement protocol: warmup MCS before any sample, then n_samples
// measurements separated by stride MCS.
struct Protocol {
    int warmup = 1000;
    int n_samples = 1000;
    int stride = 100;

    void validate() const;
};

struct RunSettings {
    int lane_budget = 2048;
    KernelBackend backend = KernelBackend::Auto;
};

struct SampleSeries {
    double T = 0.0;
    int side = 0;
    Protocol protocol;
    uint64_t seed = 0;
    // Normalization for magnetization-like columns: N for spin models,
    // N*(q-1) for Potts (where M is q*n_max - N).
    double m_norm = 1.0;
    std::vector<std::pair<int64_t, double>> samples;  // (M, E) per measurement
};

struct PointStats {
    double m_signed = 0.0, m_abs = 0.0;
    double chi = 0.0, chi_abs = 0.0;
    double e_per_spin = 0.0;
    double se_m_signed = 0.0, se_m_abs = 0.0;
    double se_chi = 0.0, se_chi_abs = 0.0;
    double se_e = 0.0;
    int n_samples = 0;
};

// chi = (<M^2> - <M>^2) / (T*N); chi_abs substitutes <|M|> for <M>.
// Throws with fewer than 2 samples.
std::pair<double, double> susceptibility(const SampleSeries& series);

PointStats estimate(const SampleSeries& series);

// Runs the model named in params at one temperature (params.T ignored in favor
// of the explicit argument). Deterministic in all inputs; the lattice starts
// ALL_UP (uniform state 1 for Potts) so below-Tc points measure the magnetized
// branch instead of a coarsening transient.
std::pair<SampleSeries, PointStats> run_temperature_point(
    const ModelParams& params, int side, double temperature, const Protocol& protocol,
    const RunSettings& settings, uint64_t seed);

// One point per temperature, seeds derived as master_seed + index; output
// order matches t_list regardless of worker count.
std::vector<PointStats> temperature_sweep(const ModelParams& params, int side,
                                          const std::vector<double>& t_list,
                                          const Protocol& protocol,
                                          const RunSettings& settings,
                                          uint64_t master_seed, int workers = 1);

}  // namespace ising
