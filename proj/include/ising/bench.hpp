#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ising/kernel.hpp"

namespace ising {

enum class BenchVariant { LaneKernel, SequentialReference };
const char* variant_name(BenchVariant v);

struct ThroughputReport {
    int side = 0;
    std::string variant;
    double spins_per_us = 0.0;
    double ns_per_mcs = 0.0;
    double wall_seconds = 0.0;
    long n_mcs = 0;
};

// Timed MCS loop at T = 2.5 (near-critical acceptance mix) until at least
// min_seconds of wall time; warmup excluded. min_seconds must be >= 1.
ThroughputReport throughput(int side, BenchVariant variant, double min_seconds,
                            KernelBackend backend = KernelBackend::Auto,
                            uint64_t seed = 1);

// Aligned text table sorted by (L, variant), with the estimated whole-point
// time under the default protocol and the published hardware rate as context.
std::string render_report(std::span<const ThroughputReport> reports);
std::string report_csv(std::span<const ThroughputReport> reports);

}  // namespace ising
