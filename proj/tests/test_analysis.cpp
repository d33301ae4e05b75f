#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ising/analysis.hpp"
#include "ising/common.hpp"

using namespace ising;

TEST_CASE("onsager magnetization") {
    CHECK(onsager_magnetization(0.1) > 1.0 - 1e-9);
    CHECK(onsager_magnetization(2.0) == doctest::Approx(0.9113193779).epsilon(1e-8));
    CHECK(onsager_magnetization(1.5) == doctest::Approx(0.9864996026).epsilon(1e-8));
    CHECK(onsager_magnetization(2.5) == 0.0);
    CHECK(onsager_magnetization(kCriticalTemperature) == 0.0);
    CHECK_THROWS_AS(onsager_magnetization(0.0), std::invalid_argument);
    CHECK_THROWS_AS(onsager_magnetization(-2.0), std::invalid_argument);

    // continuous and non-increasing below Tc, identically zero above
    double prev = 1.0 + 1e-12;
    for (double t = 0.2; t < 3.2; t += 0.01) {
        const double m = onsager_magnetization(t);
        CHECK(m <= prev + 1e-12);
        if (t >= kCriticalTemperature) CHECK(m == 0.0);
        prev = m;
    }
}

namespace {

std::vector<std::pair<double, double>> sample_lorentzian(double a, double t0, double w,
                                                         double lo, double hi, int n) {
    std::vector<std::pair<double, double>> pts;
    for (int i = 0; i < n; ++i) {
        const double t = lo + (hi - lo) * i / (n - 1);
        const double u = (t - t0) / w;
        pts.emplace_back(t, a / (1.0 + u * u));
    }
    return pts;
}

double gauss(SplitMix64& sm) {
    // Box-Muller on splitmix output
    const double u1 = (double(sm.next() >> 11) + 0.5) * 0x1.0p-53;
    const double u2 = (double(sm.next() >> 11) + 0.5) * 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

}  // namespace

TEST_CASE("lorentzian fit on exact data") {
    const auto pts = sample_lorentzian(100.0, 2.35, 0.2, 2.0, 2.7, 15);
    const auto fit = lorentzian_fit(pts, 7);  // whole window
    CHECK(fit.chi_max == doctest::Approx(100.0).epsilon(1e-6));
    CHECK(fit.t_star == doctest::Approx(2.35).epsilon(1e-6));
    CHECK(fit.width == doctest::Approx(0.2).epsilon(1e-6));
    CHECK(fit.r2 == doctest::Approx(1.0).epsilon(1e-9));

    // default 7-point window around the maximum also recovers the parameters
    const auto small = lorentzian_fit(pts);
    CHECK(small.t_star == doctest::Approx(2.35).epsilon(1e-6));
    CHECK(small.window.first >= 2.0);
    CHECK(small.window.second <= 2.7);
}

TEST_CASE("lorentzian fit under 1% noise") {
    SplitMix64 sm(12);
    int hits = 0;
    const int trials = 20;
    for (int k = 0; k < trials; ++k) {
        auto pts = sample_lorentzian(80.0, 2.35, 0.22, 2.05, 2.65, 13);
        for (auto& [t, y] : pts) y *= 1.0 + 0.01 * gauss(sm);
        const auto fit = lorentzian_fit(pts, 4);
        if (std::fabs(fit.t_star - 2.35) <= 0.01) ++hits;
    }
    CHECK(hits >= trials - 1);  // allow one unlucky noise draw
}

TEST_CASE("lorentzian fit rejects bad inputs") {
    std::vector<std::pair<double, double>> three = {{1.0, 1.0}, {2.0, 3.0}, {3.0, 1.0}};
    CHECK_THROWS_AS(lorentzian_fit(three), std::invalid_argument);
    auto pts = sample_lorentzian(10.0, 2.3, 0.3, 2.0, 2.6, 9);
    pts[4].second = -1.0;
    CHECK_THROWS_AS(lorentzian_fit(pts), std::invalid_argument);
}

TEST_CASE("power law fit") {
    std::vector<double> sides = {16, 32, 64, 128, 256};
    std::vector<double> chi;
    for (const double L : sides) chi.push_back(0.05 * std::pow(L, 1.75));
    const auto fit = power_law_fit(sides, chi);
    CHECK(fit.exponent == doctest::Approx(1.75).epsilon(1e-12));
    CHECK(fit.intercept == doctest::Approx(std::log(0.05)).epsilon(1e-9));
    CHECK(fit.r2 == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(power_law_fit(std::vector<double>{16, 32}, std::vector<double>{1, 2}),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        power_law_fit(std::vector<double>{16, 32, 64}, std::vector<double>{1, -2, 3}),
        std::invalid_argument);
}

TEST_CASE("Tc extrapolation") {
    std::vector<double> sides = {16, 32, 64, 128};
    std::vector<double> tstar;
    for (const double L : sides) tstar.push_back(2.269 + 1.0 / L);
    const auto fit = tc_extrapolate(sides, tstar);
    CHECK(fit.tc == doctest::Approx(2.269).epsilon(1e-12));
    CHECK(fit.b == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(fit.r2 == doctest::Approx(1.0).epsilon(1e-12));

    CHECK(kCriticalTemperature ==
          doctest::Approx(2.0 / std::log(1.0 + std::sqrt(2.0))).epsilon(1e-15));

    CHECK_THROWS_AS(
        tc_extrapolate(std::vector<double>{16, 16, 16}, std::vector<double>{1, 2, 3}),
        std::invalid_argument);
    CHECK_THROWS_AS(tc_extrapolate(std::vector<double>{16, 32}, std::vector<double>{1, 2}),
                    std::invalid_argument);
}

TEST_CASE("exhaustive oracle frozen values") {
    // independently computed by a full enumeration in another language
    const auto a = exhaustive_oracle(2, 1.0);
    CHECK(a.e_per_spin == doctest::Approx(-1.9959820859).epsilon(1e-9));
    CHECK(a.m_abs == doctest::Approx(0.9986607327).epsilon(1e-9));
    CHECK(a.chi_abs == doctest::Approx(0.0040107395).epsilon(1e-7));

    const auto b = exhaustive_oracle(4, 2.0);
    CHECK(b.e_per_spin == doctest::Approx(-1.7553802888).epsilon(1e-9));
    CHECK(b.m_abs == doctest::Approx(0.9189432674).epsilon(1e-9));
    CHECK(b.chi_abs == doctest::Approx(0.1957196235).epsilon(1e-7));

    const auto c = exhaustive_oracle(4, 3.0);
    CHECK(c.e_per_spin == doctest::Approx(-1.0170696270).epsilon(1e-9));
    CHECK(c.m_abs == doctest::Approx(0.6012913260).epsilon(1e-9));
    CHECK(c.chi_abs == doctest::Approx(0.4769967044).epsilon(1e-7));
}

TEST_CASE("exhaustive oracle structure") {
    const auto g = exhaustive_oracle(2, 0.05);
    CHECK(g.e_per_spin == doctest::Approx(-2.0).epsilon(1e-9));  // ground state

    for (const double t : {0.5, 1.0, 2.0, 3.0}) {
        const auto o = exhaustive_oracle(4, t);
        CHECK(std::fabs(o.m_signed) < 1e-12);  // exact +- symmetry
        double total = 0.0;
        for (const auto& [e, p] : o.energy_pmf) total += p;
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }

    // d<E>/dT >= 0 (numerically, finite differences)
    double prev = exhaustive_oracle(4, 0.4).e_per_spin;
    for (double t = 0.6; t < 5.0; t += 0.2) {
        const double e = exhaustive_oracle(4, t).e_per_spin;
        CHECK(e >= prev - 1e-12);
        prev = e;
    }

    CHECK_THROWS_AS(exhaustive_oracle(6, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(exhaustive_oracle(3, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(exhaustive_oracle(4, 0.0), std::invalid_argument);
}
