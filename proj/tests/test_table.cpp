#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "ising/table.hpp"

using namespace ising;

TEST_CASE("NN table frozen values") {
    // entry = min(4095, round(4096*exp(-2*eps/T))); cross-checked against a
    // double-precision evaluation done independently of this code base
    struct Row {
        double t;
        uint16_t e2, e4;
    };
    const Row rows[] = {{0.5, 1, 0},    {1.0, 75, 1},    {2.0, 554, 75},
                        {2.269, 703, 121}, {2.5, 827, 167}, {5.0, 1840, 827}};
    for (const auto& r : rows) {
        const auto t = BoltzmannTable::build(r.t);
        CHECK(t.entry(2) == r.e2);
        CHECK(t.entry(4) == r.e4);
        CHECK(t.entry(0) == 4095);
        CHECK(t.entry(-2) == 4095);
        CHECK(t.entry(-4) == 4095);
    }
}

TEST_CASE("table edge cases") {
    const auto hot = BoltzmannTable::build(1e9);
    for (int eps = -4; eps <= 4; eps += 2) CHECK(hot.entry(eps) == 4095);

    const auto t = BoltzmannTable::build(2.269);
    CHECK(t.entry(2) >= t.entry(4));
    CHECK_THROWS_AS(t.entry(3), std::invalid_argument);
    CHECK_THROWS_AS(t.entry(6), std::invalid_argument);
    CHECK_THROWS_AS(BoltzmannTable::build(0.0), std::invalid_argument);
    CHECK_THROWS_AS(BoltzmannTable::build(-1.0), std::invalid_argument);
}

TEST_CASE("fixed-point fidelity across temperatures") {
    for (const double T : {0.1, 0.5, 1.0, 2.0, 2.269, 2.5, 3.5, 5.0, 50.0}) {
        const auto t = BoltzmannTable::build(T);
        for (int eps = -4; eps <= 4; eps += 2) {
            const double exact = std::min(1.0, std::exp(-2.0 * eps / T));
            const double realized = double(t.entry(eps)) / 4096.0;
            CHECK(std::fabs(realized - exact) <= 1.0 / 4096.0 + 1e-12);
        }
    }
}

TEST_CASE("J1J2 table") {
    const auto t = J1J2Table::build(2.0, 1.0, -0.5);
    const auto pos = t.positive_eps_values();
    CHECK(pos.size() >= 5);
    for (size_t i = 0; i + 1 < pos.size(); ++i) CHECK(pos[i] < pos[i + 1]);
    for (const double v : pos) CHECK(v > 0.0);

    // eps'(4,4) = 4 - 2 = 2, threshold = fixed point of dE = 4
    CHECK(t.eps_prime(4, 4) == doctest::Approx(2.0));
    CHECK(t.threshold(4, 4) == fixed_point_threshold(4.0, 2.0));
    CHECK_FALSE(t.flip_is_free(4, 4));
    CHECK(t.flip_is_free(-4, 4));  // -4 - 2 = -6
    CHECK(t.flip_is_free(2, 4));   // 2 - 2 = 0: dE = 0 flips

    // entries non-increasing in eps'
    double prev = 4096.0;
    for (const double v : pos) {
        const double thr = double(fixed_point_threshold(2.0 * v, 2.0));
        CHECK(thr <= prev);
        prev = thr;
    }

    const auto hot = J1J2Table::build(1e9, 1.0, -0.5);
    for (int a = -4; a <= 4; a += 2)
        for (int b = -4; b <= 4; b += 2) CHECK(hot.threshold(a, b) == 4095);

    CHECK_THROWS_AS(J1J2Table::build(2.0, -1.0, -0.5), std::invalid_argument);
    CHECK_THROWS_AS(J1J2Table::build(2.0, 1.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(t.threshold(3, 0), std::invalid_argument);
}

TEST_CASE("J2=0 degenerates to the NN table") {
    for (const double T : {1.0, 2.269, 4.0}) {
        const auto grid = J1J2Table::build(T, 1.0, 0.0);
        const auto nn = BoltzmannTable::build(T);
        for (int a = -4; a <= 4; a += 2)
            for (int b = -4; b <= 4; b += 2) {
                CHECK(grid.threshold(a, b) == nn.entry(a));
                CHECK(grid.flip_is_free(a, b) == (a <= 0));
            }
    }
}

TEST_CASE("Potts table") {
    const auto t = PottsTable::build(2.0, 1.0);
    for (int k = 1; k <= 4; ++k)
        CHECK(t.threshold(k) == fixed_point_threshold(double(k), 2.0));
    CHECK(t.threshold(1) >= t.threshold(4));
    CHECK_THROWS_AS(t.threshold(0), std::invalid_argument);
    CHECK_THROWS_AS(t.threshold(5), std::invalid_argument);
    CHECK_THROWS_AS(PottsTable::build(2.0, -1.0), std::invalid_argument);
}
