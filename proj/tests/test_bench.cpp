#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <sstream>

#include "ising/bench.hpp"
#include "ising/cli.hpp"

using namespace ising;

TEST_CASE("throughput report consistency") {
    const auto rep = throughput(64, BenchVariant::LaneKernel, 1.0);
    CHECK(rep.spins_per_us > 0.0);
    CHECK(rep.n_mcs >= 1);
    CHECK(rep.wall_seconds >= 1.0);
    // ns/MCS * spins/us / 1000 ~ N
    const double n_est = rep.ns_per_mcs * rep.spins_per_us / 1000.0;
    CHECK(std::fabs(n_est - 64.0 * 64.0) / (64.0 * 64.0) < 0.05);

    CHECK_THROWS_AS(throughput(64, BenchVariant::LaneKernel, 0.5), std::invalid_argument);
}

TEST_CASE("report rendering") {
    ThroughputReport a{64, "lane-avx2", 1000.0, 4096.0, 1.0, 244};
    ThroughputReport b{32, "sequential", 50.0, 20480.0, 1.0, 48};
    const std::string table = render_report(std::vector<ThroughputReport>{a, b});
    CHECK(table.find("614400") != std::string::npos);  // context row
    CHECK(table.find("lane-avx2") != std::string::npos);
    // ascending by L
    CHECK(table.find("   32") < table.find("   64"));

    const std::string csv = report_csv(std::vector<ThroughputReport>{a, b});
    std::stringstream ss(csv);
    std::string header, row1;
    std::getline(ss, header);
    std::getline(ss, row1);
    CHECK(header == "L,variant,spins_per_us,ns_per_mcs,wall_seconds,n_mcs");
    CHECK(row1.rfind("32,sequential,50,", 0) == 0);

    CHECK_THROWS_AS(render_report({}), std::invalid_argument);
    CHECK_THROWS_AS(report_csv({}), std::invalid_argument);
}

TEST_CASE("timing does not perturb seeded results") {
    RunConfig cfg;
    cfg.side = 8;
    cfg.t_list = {2.5};
    cfg.protocol = {50, 20, 2};
    cfg.lane_budget = 16;
    cfg.master_seed = 4;
    const std::string before = sweep_csv(cfg);
    (void)throughput(16, BenchVariant::SequentialReference, 1.0);
    const std::string after = sweep_csv(cfg);
    CHECK(before == after);
}

TEST_CASE("repeat runs land in the same ballpark") {
    const auto r1 = throughput(32, BenchVariant::LaneKernel, 1.0);
    const auto r2 = throughput(32, BenchVariant::LaneKernel, 1.0);
    const double spread = std::fabs(r1.spins_per_us - r2.spins_per_us) /
                          std::max(r1.spins_per_us, r2.spins_per_us);
    WARN_LT(spread, 0.2);  // environment sanity, not a correctness gate
}
