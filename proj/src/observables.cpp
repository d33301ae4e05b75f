#include "ising/observables.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "ising/common.hpp"
#include "ising/models.hpp"

namespace ising {

void Protocol::validate() const {
    if (warmup < 0) throw UsageError("warmup must be >= 0");
    if (n_samples < 1) throw UsageError("n_samples must be >= 1");
    if (stride < 1) throw UsageError("stride must be >= 1");
}

std::pair<double, double> susceptibility(const SampleSeries& series) {
    const size_t n = series.samples.size();
    if (n < 2) throw std::invalid_argument("susceptibility needs at least 2 samples");
    double mean_m = 0.0, mean_abs = 0.0;
    for (const auto& [m, e] : series.samples) {
        mean_m += double(m);
        mean_abs += std::fabs(double(m));
    }
    mean_m /= double(n);
    mean_abs /= double(n);
    // <M^2> - <M>^2 is Var(M); with <|M|> in place of <M> it is Var(|M|),
    // since M^2 = |M|^2. Centered two-pass sums keep both non-negative.
    double var = 0.0, var_abs = 0.0;
    for (const auto& [m, e] : series.samples) {
        var += (double(m) - mean_m) * (double(m) - mean_m);
        var_abs += (std::fabs(double(m)) - mean_abs) * (std::fabs(double(m)) - mean_abs);
    }
    var /= double(n);
    var_abs /= double(n);
    const double norm = series.T * double(series.side) * double(series.side);
    return {std::max(0.0, var / norm), std::max(0.0, var_abs / norm)};
}

PointStats estimate(const SampleSeries& series) {
    const size_t n = series.samples.size();
    if (n < 1) throw std::invalid_argument("estimate needs at least 1 sample");
    const double nd = double(n);
    const double n_sites = double(series.side) * double(series.side);

    double s_m = 0.0, s_abs = 0.0, s_m2 = 0.0, s_e = 0.0;
    for (const auto& [m, e] : series.samples) {
        const double md = double(m);
        s_m += md;
        s_abs += std::fabs(md);
        s_m2 += md * md;
        s_e += e;
    }
    const double mean_m = s_m / nd;
    const double mean_abs = s_abs / nd;
    const double mean_e = s_e / nd;

    PointStats st;
    st.n_samples = int(n);
    st.m_signed = mean_m / series.m_norm;
    st.m_abs = mean_abs / series.m_norm;
    st.e_per_spin = mean_e / n_sites;

    const double chi_norm = series.T * n_sites;
    if (n >= 2) {
        const auto [chi, chi_abs] = susceptibility(series);
        st.chi = chi;
        st.chi_abs = chi_abs;
    }
    if (n < 2) return st;

    // naive standard errors of the means (samples treated as independent;
    // the stride is assumed to decorrelate)
    double v_m = 0.0, v_abs = 0.0, v_e = 0.0;
    for (const auto& [m, e] : series.samples) {
        const double md = double(m);
        v_m += (md - mean_m) * (md - mean_m);
        v_abs += (std::fabs(md) - mean_abs) * (std::fabs(md) - mean_abs);
        v_e += (e - mean_e) * (e - mean_e);
    }
    st.se_m_signed = std::sqrt(v_m / (nd * (nd - 1.0))) / series.m_norm;
    st.se_m_abs = std::sqrt(v_abs / (nd * (nd - 1.0))) / series.m_norm;
    st.se_e = std::sqrt(v_e / (nd * (nd - 1.0))) / n_sites;

    // leave-one-out jackknife for the susceptibilities
    double jk_chi = 0.0, jk_chi_abs = 0.0, jk2_chi = 0.0, jk2_chi_abs = 0.0;
    for (const auto& [m, e] : series.samples) {
        const double md = double(m);
        const double lm = (s_m - md) / (nd - 1.0);
        const double labs = (s_abs - std::fabs(md)) / (nd - 1.0);
        const double lm2 = (s_m2 - md * md) / (nd - 1.0);
        const double c = (lm2 - lm * lm) / chi_norm;
        const double ca = (lm2 - labs * labs) / chi_norm;
        jk_chi += c;
        jk_chi_abs += ca;
        jk2_chi += c * c;
        jk2_chi_abs += ca * ca;
    }
    st.se_chi = std::sqrt(std::max(0.0, (nd - 1.0) / nd * (jk2_chi - jk_chi * jk_chi / nd)));
    st.se_chi_abs =
        std::sqrt(std::max(0.0, (nd - 1.0) / nd * (jk2_chi_abs - jk_chi_abs * jk_chi_abs / nd)));
    return st;
}

namespace {

struct PointRunner {
    const ModelParams& params;
    int side;
    double temperature;
    const Protocol& protocol;
    const RunSettings& settings;
    uint64_t seed;

    SampleSeries run() const {
        SampleSeries series;
        series.T = temperature;
        series.side = side;
        series.protocol = protocol;
        series.seed = seed;
        series.samples.reserve(size_t(protocol.n_samples));

        const uint64_t bank_seed = seed ^ 0x9E3779B97F4A7C15ull;
        switch (params.model) {
            case Model::NnIsing: {
                SpinLattice lat(side, Init::AllUp);
                LaneRngBank bank(bank_seed, settings.lane_budget);
                RowBlockSchedule sched(side, settings.lane_budget);
                const auto table = BoltzmannTable::build(temperature);
                const KernelBackend be = resolve_backend(settings.backend);
                series.m_norm = double(lat.sites());
                for (int w = 0; w < protocol.warmup; ++w) mcs(lat, bank, table, sched, be);
                for (int s = 0; s < protocol.n_samples; ++s) {
                    for (int k = 0; k < protocol.stride; ++k) mcs(lat, bank, table, sched, be);
                    series.samples.emplace_back(lat.magnetization(),
                                                -params.J * double(lat.nn_bond_sum()));
                }
                break;
            }
            case Model::J1J2: {
                SpinLattice lat(side, Init::AllUp);
                LaneRngBank bank(bank_seed, settings.lane_budget);
                const auto table = J1J2Table::build(temperature, params.J1, params.J2);
                const auto partition = four_color_partition(side);
                series.m_norm = double(lat.sites());
                for (int w = 0; w < protocol.warmup; ++w)
                    j1j2_mcs(lat, bank, table, partition, settings.lane_budget);
                for (int s = 0; s < protocol.n_samples; ++s) {
                    for (int k = 0; k < protocol.stride; ++k)
                        j1j2_mcs(lat, bank, table, partition, settings.lane_budget);
                    series.samples.emplace_back(
                        lat.magnetization(), total_energy_j1j2(lat, params.J1, params.J2));
                }
                break;
            }
            case Model::Potts: {
                PottsLattice lat(side, params.q, Init::AllUp);
                LaneRngBank bank(bank_seed, settings.lane_budget);
                const auto table = PottsTable::build(temperature, params.J);
                const auto partition = checkerboard_partition(side);
                series.m_norm = double(lat.sites()) * double(params.q - 1);
                for (int w = 0; w < protocol.warmup; ++w)
                    potts_mcs(lat, bank, table, partition, settings.lane_budget);
                for (int s = 0; s < protocol.n_samples; ++s) {
                    for (int k = 0; k < protocol.stride; ++k)
                        potts_mcs(lat, bank, table, partition, settings.lane_budget);
                    series.samples.emplace_back(lat.order_numerator(),
                                                potts_energy(lat, params.J));
                }
                break;
            }
        }
        return series;
    }
};

}  // namespace

std::pair<SampleSeries, PointStats> run_temperature_point(
    const ModelParams& params, int side, double temperature, const Protocol& protocol,
    const RunSettings& settings, uint64_t seed) {
    protocol.validate();
    if (temperature <= 0.0) throw UsageError("T must be > 0");
    ModelParams p = params;
    p.T = temperature;
    p.validate();
    PointRunner runner{p, side, temperature, protocol, settings, seed};
    SampleSeries series = runner.run();
    PointStats stats = estimate(series);
    return {std::move(series), stats};
}

std::vector<PointStats> temperature_sweep(const ModelParams& params, int side,
                                          const std::vector<double>& t_list,
                                          const Protocol& protocol,
                                          const RunSettings& settings,
                                          uint64_t master_seed, int workers) {
    if (t_list.empty()) throw UsageError("temperature list must not be empty");
    if (workers < 1) throw UsageError("workers must be >= 1");
    std::vector<PointStats> out(t_list.size());

    std::atomic<size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto work = [&] {
        for (size_t i; (i = next.fetch_add(1)) < t_list.size();) {
            try {
                out[i] = run_temperature_point(params, side, t_list[i], protocol, settings,
                                               master_seed + i)
                             .second;
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };

    const int extra = std::min<int>(workers, int(t_list.size())) - 1;
    std::vector<std::thread> pool;
    pool.reserve(size_t(extra));
    for (int k = 0; k < extra; ++k) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
    return out;
}

}  // namespace ising
