#include "ising/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ising/analysis.hpp"
#include "ising/common.hpp"
#include "ising/models.hpp"

namespace ising {

using nlohmann::json;

void RunConfig::validate() const {
    params.validate();
    if (side < 4 || side % 2 != 0) throw UsageError("L must be even and >= 4");
    if (t_list.empty()) throw UsageError("T list must not be empty");
    for (const double t : t_list)
        if (t <= 0.0) throw UsageError("T values must be > 0");
    if (!std::is_sorted(t_list.begin(), t_list.end()))
        throw UsageError("T list must be sorted ascending");
    protocol.validate();
    if (lane_budget < side / 2)
        throw UsageError("lanes must be >= L/2 (one row of a sublattice)");
    if (lane_budget % 2 != 0) throw UsageError("lanes must be even");
    if (lane_budget > 4095) throw UsageError("lanes must be <= 4095");
    if (workers < 1) throw UsageError("workers must be >= 1");
    if (out.empty()) throw UsageError("out path must not be empty");
}

std::vector<double> default_t_list() { return parse_t_range("1.5:3.5:0.1"); }

std::vector<double> parse_t_range(const std::string& spec) {
    double a = 0, b = 0, step = 0;
    char extra = 0;
    if (std::sscanf(spec.c_str(), "%lf:%lf:%lf%c", &a, &b, &step, &extra) != 3)
        throw UsageError("T-range must be 'a:b:step', got '" + spec + "'");
    if (step <= 0.0) throw UsageError("T-range step must be > 0");
    if (b < a) throw UsageError("T-range needs a <= b");
    std::vector<double> out;
    const int n = int(std::floor((b - a) / step + 1e-9)) + 1;
    for (int i = 0; i < n; ++i) out.push_back(a + i * step);
    return out;
}

Model parse_model(const std::string& name) {
    if (name == "ising") return Model::NnIsing;
    if (name == "j1j2") return Model::J1J2;
    if (name == "potts") return Model::Potts;
    throw UsageError("unknown model '" + name + "' (expected ising, j1j2 or potts)");
}

KernelBackend parse_backend(const std::string& name) {
    if (name == "auto") return KernelBackend::Auto;
    if (name == "scalar") return KernelBackend::Scalar;
    if (name == "avx2") return KernelBackend::Avx2;
    throw UsageError("unknown kernel '" + name + "' (expected auto, scalar or avx2)");
}

RunConfig config_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw UsageError(std::string("config file is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw UsageError("config file must hold a JSON object");

    static const std::vector<std::string> known = {
        "model", "L", "T_list", "T_range", "J", "J1", "J2", "q", "warmup", "samples",
        "stride", "lanes", "seed", "workers", "out", "kernel"};
    for (const auto& [key, value] : j.items()) {
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw UsageError("unknown config key '" + key + "'");
    }

    RunConfig cfg;
    try {
        if (j.contains("model")) cfg.params.model = parse_model(j["model"].get<std::string>());
        if (j.contains("L")) cfg.side = j["L"].get<int>();
        if (j.contains("T_list")) cfg.t_list = j["T_list"].get<std::vector<double>>();
        if (j.contains("T_range")) {
            if (j.contains("T_list"))
                throw UsageError("config sets both T_list and T_range");
            cfg.t_list = parse_t_range(j["T_range"].get<std::string>());
        }
        if (j.contains("J")) cfg.params.J = j["J"].get<double>();
        if (j.contains("J1")) cfg.params.J1 = j["J1"].get<double>();
        if (j.contains("J2")) cfg.params.J2 = j["J2"].get<double>();
        if (j.contains("q")) cfg.params.q = j["q"].get<int>();
        if (j.contains("warmup")) cfg.protocol.warmup = j["warmup"].get<int>();
        if (j.contains("samples")) cfg.protocol.n_samples = j["samples"].get<int>();
        if (j.contains("stride")) cfg.protocol.stride = j["stride"].get<int>();
        if (j.contains("lanes")) cfg.lane_budget = j["lanes"].get<int>();
        if (j.contains("seed")) cfg.master_seed = j["seed"].get<uint64_t>();
        if (j.contains("workers")) cfg.workers = j["workers"].get<int>();
        if (j.contains("out")) cfg.out = j["out"].get<std::string>();
        if (j.contains("kernel")) cfg.backend = parse_backend(j["kernel"].get<std::string>());
    } catch (const json::exception& e) {
        throw UsageError(std::string("config value has the wrong type: ") + e.what());
    }
    return cfg;
}

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string csv_row(const RunConfig& cfg, double t, const PointStats& st, uint64_t seed) {
    std::string row;
    row += std::to_string(cfg.side);
    row += ',';
    row += fmt(t);
    row += ',';
    row += fmt(st.m_signed);
    row += ',';
    row += fmt(st.m_abs);
    row += ',';
    row += fmt(st.chi);
    row += ',';
    row += fmt(st.chi_abs);
    row += ',';
    row += fmt(st.e_per_spin);
    row += ',';
    row += fmt(st.se_m_abs);
    row += ',';
    row += fmt(st.se_chi_abs);
    row += ',';
    row += std::to_string(st.n_samples);
    row += ',';
    row += std::to_string(cfg.protocol.warmup);
    row += ',';
    row += std::to_string(cfg.protocol.stride);
    row += ',';
    row += std::to_string(seed);
    row += '\n';
    return row;
}

json config_json(const RunConfig& cfg) {
    json j;
    j["model"] = model_name(cfg.params.model);
    j["L"] = cfg.side;
    j["T_list"] = cfg.t_list;
    j["J"] = cfg.params.J;
    if (cfg.params.model == Model::J1J2) {
        j["J1"] = cfg.params.J1;
        j["J2"] = cfg.params.J2;
    }
    if (cfg.params.model == Model::Potts) j["q"] = cfg.params.q;
    j["warmup"] = cfg.protocol.warmup;
    j["samples"] = cfg.protocol.n_samples;
    j["stride"] = cfg.protocol.stride;
    j["lanes"] = cfg.lane_budget;
    j["seed"] = cfg.master_seed;
    j["workers"] = cfg.workers;
    j["kernel"] = backend_name(cfg.backend);
    j["out"] = cfg.out;
    return j;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    os << content;
    if (!os) throw std::runtime_error("short write to " + path);
}

std::string read_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

}  // namespace

std::string sweep_csv(const RunConfig& config) {
    config.validate();
    RunSettings settings{config.lane_budget, config.backend};
    const auto stats = temperature_sweep(config.params, config.side, config.t_list,
                                         config.protocol, settings, config.master_seed,
                                         config.workers);
    std::string csv = std::string(kCsvHeader) + "\n";
    for (size_t i = 0; i < stats.size(); ++i)
        csv += csv_row(config, config.t_list[i], stats[i], config.master_seed + i);
    return csv;
}

std::string sweep_metadata_json(const RunConfig& config) {
    json j;
    j["version"] = kVersion;
    j["config"] = config_json(config);
    json seeds = json::array();
    for (size_t i = 0; i < config.t_list.size(); ++i)
        seeds.push_back(config.master_seed + i);
    j["point_seeds"] = seeds;
    j["csv"] = config.out;
    return j.dump(2) + "\n";
}

void cmd_sweep(const RunConfig& config) {
    const std::string csv = sweep_csv(config);
    write_file(config.out, csv);
    write_file(config.out + ".meta.json", sweep_metadata_json(config));
}

std::vector<FitReportRow> read_sweep_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open " + path);
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error(path + ": empty file");
    if (line.rfind("L,T,", 0) != 0)
        throw std::runtime_error(path + ": unrecognized CSV header");
    std::vector<FitReportRow> rows;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() < 7) throw std::runtime_error(path + ": short CSV row");
        rows.push_back({std::stod(cells[0]), std::stod(cells[1]), std::stod(cells[5])});
    }
    return rows;
}

std::string cmd_fit(const std::vector<std::string>& csv_paths, int window_half_points) {
    if (csv_paths.empty()) throw UsageError("fit needs at least one CSV path");
    std::map<double, std::vector<std::pair<double, double>>> by_size;
    for (const auto& path : csv_paths)
        for (const auto& row : read_sweep_csv(path))
            by_size[row.side].emplace_back(row.t, row.chi_abs);

    json report;
    report["version"] = kVersion;
    json fits = json::array();
    std::vector<double> sides, chi_maxes, t_stars;
    for (auto& [side, pts] : by_size) {
        std::sort(pts.begin(), pts.end());
        const auto fit = lorentzian_fit(pts, window_half_points);
        json f;
        f["L"] = side;
        f["chi_max"] = fit.chi_max;
        f["t_star"] = fit.t_star;
        f["width"] = fit.width;
        f["r2"] = fit.r2;
        f["window"] = {fit.window.first, fit.window.second};
        fits.push_back(f);
        sides.push_back(side);
        chi_maxes.push_back(fit.chi_max);
        t_stars.push_back(fit.t_star);
    }
    report["lorentzian"] = fits;
    if (sides.size() >= 3) {
        const auto scaling = power_law_fit(sides, chi_maxes);
        report["scaling"] = {{"exponent", scaling.exponent},
                             {"intercept", scaling.intercept},
                             {"r2", scaling.r2}};
        const auto tc = tc_extrapolate(sides, t_stars);
        report["tc"] = {{"tc", tc.tc}, {"b", tc.b}, {"r2", tc.r2}};
    }
    return report.dump(2) + "\n";
}

RngTestOutput cmd_rngtest(Generator generator, uint64_t seed, size_t n_bits, int block_len,
                          const std::string& export_path) {
    const Bitstream bits = generate_stream(generator, seed, n_bits);
    if (!export_path.empty()) export_bitstream(bits, export_path);
    RngTestOutput out;
    out.results = run_battery(bits, block_len);
    out.all_pass = true;
    char buf[128];
    std::snprintf(buf, sizeof buf, "generator=%s bits=%zu seed=%llu alpha=%.2f\n",
                  generator_name(generator), n_bits, (unsigned long long)seed, kNistAlpha);
    out.table = buf;
    out.table += "test                 p-value   result\n";
    for (const auto& r : out.results) {
        std::snprintf(buf, sizeof buf, "%-20s %8.4f   %s\n", r.name.c_str(), r.p_value,
                      r.pass ? "PASS" : "FAIL");
        out.table += buf;
        out.all_pass = out.all_pass && r.pass;
    }
    return out;
}

namespace {

void add_config_flags(CLI::App* cmd, RunConfig& cfg, std::string& config_path,
                      std::string& model, std::string& kernel, std::string& t_range,
                      std::vector<double>& t_flags) {
    cmd->add_option("--config", config_path, "JSON config file (flags override it)");
    cmd->add_option("--model", model, "ising, j1j2 or potts");
    cmd->add_option("--L", cfg.side, "lattice side (even, >= 4)");
    cmd->add_option("--T", t_flags, "temperature(s)");
    cmd->add_option("--T-range", t_range, "a:b:step temperature grid");
    cmd->add_option("--J", cfg.params.J, "NN Ising / Potts coupling");
    cmd->add_option("--J1", cfg.params.J1, "J1/J2 nearest coupling (> 0)");
    cmd->add_option("--J2", cfg.params.J2, "J1/J2 next-nearest coupling (< 0)");
    cmd->add_option("--q", cfg.params.q, "Potts state count");
    cmd->add_option("--warmup", cfg.protocol.warmup, "thermalization MCS");
    cmd->add_option("--samples", cfg.protocol.n_samples, "measurements per point");
    cmd->add_option("--stride", cfg.protocol.stride, "MCS between measurements");
    cmd->add_option("--lanes", cfg.lane_budget, "parallel update lanes");
    cmd->add_option("--seed", cfg.master_seed, "master seed");
    cmd->add_option("--workers", cfg.workers, "parallel temperature points");
    cmd->add_option("--kernel", kernel, "auto, scalar or avx2");
    cmd->add_option("--out", cfg.out, "output CSV path");
}

// Flags beat config-file values: re-apply any flag the user actually passed.
RunConfig merge_config(const CLI::App* cmd, const RunConfig& flag_cfg,
                       const std::string& config_path, const std::string& model,
                       const std::string& kernel, const std::string& t_range,
                       const std::vector<double>& t_flags) {
    RunConfig cfg;
    if (!config_path.empty()) cfg = config_from_json_text(read_file(config_path));
    auto passed = [&](const std::string& name) { return cmd->count(name) > 0; };
    if (passed("--model")) cfg.params.model = parse_model(model);
    if (passed("--L")) cfg.side = flag_cfg.side;
    if (passed("--T")) cfg.t_list = t_flags;
    if (passed("--T-range")) {
        if (passed("--T")) throw UsageError("--T and --T-range are mutually exclusive");
        cfg.t_list = parse_t_range(t_range);
    }
    if (passed("--J")) cfg.params.J = flag_cfg.params.J;
    if (passed("--J1")) cfg.params.J1 = flag_cfg.params.J1;
    if (passed("--J2")) cfg.params.J2 = flag_cfg.params.J2;
    if (passed("--q")) cfg.params.q = flag_cfg.params.q;
    if (passed("--warmup")) cfg.protocol.warmup = flag_cfg.protocol.warmup;
    if (passed("--samples")) cfg.protocol.n_samples = flag_cfg.protocol.n_samples;
    if (passed("--stride")) cfg.protocol.stride = flag_cfg.protocol.stride;
    if (passed("--lanes")) cfg.lane_budget = flag_cfg.lane_budget;
    if (passed("--seed")) cfg.master_seed = flag_cfg.master_seed;
    if (passed("--workers")) cfg.workers = flag_cfg.workers;
    if (passed("--kernel")) cfg.backend = parse_backend(kernel);
    if (passed("--out")) cfg.out = flag_cfg.out;
    if (cfg.t_list.empty()) cfg.t_list = default_t_list();
    std::sort(cfg.t_list.begin(), cfg.t_list.end());
    cfg.validate();
    return cfg;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"Lane-parallel Metropolis simulator for 2-D lattice spin models"};
    app.require_subcommand(1);

    // ---- sweep / run ----
    RunConfig flag_cfg;
    std::string config_path, model, kernel, t_range, dump_path;
    std::vector<double> t_flags;

    CLI::App* sweep = app.add_subcommand("sweep", "temperature sweep -> CSV + metadata");
    add_config_flags(sweep, flag_cfg, config_path, model, kernel, t_range, t_flags);

    CLI::App* run = app.add_subcommand("run", "single temperature point, stats to stdout");
    add_config_flags(run, flag_cfg, config_path, model, kernel, t_range, t_flags);
    run->add_option("--dump-snapshot", dump_path, "write the final lattice (ising/j1j2)");

    // ---- fit ----
    std::vector<std::string> fit_inputs;
    std::string fit_out;
    int fit_window = 3;
    CLI::App* fit = app.add_subcommand("fit", "peak + scaling fits from sweep CSVs");
    fit->add_option("csv", fit_inputs, "sweep CSV file(s)")->required();
    fit->add_option("--out", fit_out, "write the JSON report here (default stdout)");
    fit->add_option("--window", fit_window, "points on each side of the peak");

    // ---- rngtest ----
    std::string gen_name = "combined", export_path;
    uint64_t rng_seed = 1;
    size_t n_bits = 1000000;
    int block_len = 10000;
    bool strict = false;
    CLI::App* rngtest = app.add_subcommand("rngtest", "statistical test battery");
    rngtest->add_option("--generator", gen_name, "combined or lfsr32");
    rngtest->add_option("--bits", n_bits, "stream length");
    rngtest->add_option("--seed", rng_seed, "master seed");
    rngtest->add_option("--block-len", block_len, "block-frequency block length");
    rngtest->add_option("--export", export_path, "also write the packed bitstream");
    rngtest->add_flag("--strict", strict, "exit 3 if any test fails");

    // ---- bench ----
    std::vector<int> bench_sides{1024};
    std::string bench_variant = "both", bench_kernel = "auto", bench_csv;
    double min_seconds = 1.0;
    CLI::App* bench = app.add_subcommand("bench", "spin-update throughput");
    bench->add_option("--L", bench_sides, "lattice side(s)");
    bench->add_option("--variant", bench_variant, "lane, sequential or both");
    bench->add_option("--min-seconds", min_seconds, "minimum timed duration per row");
    bench->add_option("--kernel", bench_kernel, "auto, scalar or avx2");
    bench->add_option("--csv", bench_csv, "also write a CSV twin");

    // ---- oracle ----
    int oracle_side = 4;
    double oracle_t = 2.0;
    CLI::App* oracle = app.add_subcommand("oracle", "exact Gibbs averages (L in {2,4})");
    oracle->add_option("--L", oracle_side, "lattice side, 2 or 4");
    oracle->add_option("--T", oracle_t, "temperature");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (sweep->parsed()) {
            const RunConfig cfg = merge_config(sweep, flag_cfg, config_path, model, kernel,
                                               t_range, t_flags);
            cmd_sweep(cfg);
            std::cout << "wrote " << cfg.out << " and " << cfg.out << ".meta.json\n";
            return 0;
        }
        if (run->parsed()) {
            RunConfig cfg = merge_config(run, flag_cfg, config_path, model, kernel, t_range,
                                         t_flags);
            if (cfg.t_list.size() != 1 && run->count("--T") == 0 &&
                run->count("--T-range") == 0)
                cfg.t_list = {2.5};
            if (cfg.t_list.size() != 1)
                throw UsageError("run expects exactly one temperature");
            RunSettings settings{cfg.lane_budget, cfg.backend};
            const auto [series, stats] = run_temperature_point(
                cfg.params, cfg.side, cfg.t_list[0], cfg.protocol, settings,
                cfg.master_seed);
            std::printf("model=%s L=%d T=%.10g seed=%llu\n", model_name(cfg.params.model),
                        cfg.side, cfg.t_list[0], (unsigned long long)cfg.master_seed);
            std::printf("m_signed   = %+.6f +- %.6f\n", stats.m_signed, stats.se_m_signed);
            std::printf("m_abs      = %.6f +- %.6f\n", stats.m_abs, stats.se_m_abs);
            std::printf("chi        = %.6f +- %.6f\n", stats.chi, stats.se_chi);
            std::printf("chi_abs    = %.6f +- %.6f\n", stats.chi_abs, stats.se_chi_abs);
            std::printf("e_per_spin = %.6f +- %.6f\n", stats.e_per_spin, stats.se_e);
            if (!dump_path.empty()) {
                if (cfg.params.model == Model::Potts)
                    throw UsageError("--dump-snapshot supports the binary-spin models only");
                // re-run deterministically to materialize the final configuration
                SpinLattice lat(cfg.side, Init::AllUp);
                LaneRngBank bank(cfg.master_seed ^ 0x9E3779B97F4A7C15ull, cfg.lane_budget);
                if (cfg.params.model == Model::NnIsing) {
                    RowBlockSchedule sched(cfg.side, cfg.lane_budget);
                    const auto table = BoltzmannTable::build(cfg.t_list[0]);
                    const int total = cfg.protocol.warmup +
                                      cfg.protocol.n_samples * cfg.protocol.stride;
                    for (int i = 0; i < total; ++i)
                        mcs(lat, bank, table, sched, cfg.backend);
                } else {
                    const auto table =
                        J1J2Table::build(cfg.t_list[0], cfg.params.J1, cfg.params.J2);
                    const auto partition = four_color_partition(cfg.side);
                    const int total = cfg.protocol.warmup +
                                      cfg.protocol.n_samples * cfg.protocol.stride;
                    for (int i = 0; i < total; ++i)
                        j1j2_mcs(lat, bank, table, partition, cfg.lane_budget);
                }
                std::ofstream os(dump_path);
                if (!os) throw std::runtime_error("cannot open " + dump_path);
                write_snapshot(lat, os);
            }
            return 0;
        }
        if (fit->parsed()) {
            const std::string report = cmd_fit(fit_inputs, fit_window);
            if (fit_out.empty()) std::cout << report;
            else write_file(fit_out, report);
            return 0;
        }
        if (rngtest->parsed()) {
            Generator g;
            if (gen_name == "combined") g = Generator::Combined;
            else if (gen_name == "lfsr32") g = Generator::Lfsr32Only;
            else throw UsageError("unknown generator '" + gen_name + "'");
            const auto out = cmd_rngtest(g, rng_seed, n_bits, block_len, export_path);
            std::cout << out.table;
            if (strict && !out.all_pass) return 3;
            return 0;
        }
        if (bench->parsed()) {
            const KernelBackend be = parse_backend(bench_kernel);
            std::vector<ThroughputReport> reports;
            for (const int L : bench_sides) {
                if (bench_variant == "lane" || bench_variant == "both")
                    reports.push_back(throughput(L, BenchVariant::LaneKernel, min_seconds, be));
                if (bench_variant == "sequential" || bench_variant == "both")
                    reports.push_back(
                        throughput(L, BenchVariant::SequentialReference, min_seconds, be));
            }
            if (reports.empty()) throw UsageError("bench --variant must be lane, sequential or both");
            std::cout << render_report(reports);
            if (!bench_csv.empty()) write_file(bench_csv, report_csv(reports));
            return 0;
        }
        if (oracle->parsed()) {
            const auto g = exhaustive_oracle(oracle_side, oracle_t);
            std::printf("exact Gibbs averages, L=%d T=%.10g\n", oracle_side, oracle_t);
            std::printf("e_per_spin = %.10f\n", g.e_per_spin);
            std::printf("m_abs      = %.10f\n", g.m_abs);
            std::printf("m_signed   = %.10f\n", g.m_signed);
            std::printf("chi        = %.10f\n", g.chi);
            std::printf("chi_abs    = %.10f\n", g.chi_abs);
            return 0;
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}

}  // namespace ising
