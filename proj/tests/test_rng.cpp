#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <set>
#include <vector>

#include "ising/rng.hpp"

using namespace ising;

TEST_CASE("lfsr32 tap rule") {
    CHECK(lfsr32_next(0x00000001u) == 0x00000003u);
    CHECK(lfsr32_next(0x80000000u) == 0x00000001u);
    CHECK_THROWS_AS(lfsr32_next(0), std::invalid_argument);

    uint32_t s = 0xDEADBEEFu;
    for (int i = 0; i < 1000000; ++i) {
        s = detail::lfsr32_step(s);
        REQUIRE(s != 0);
    }
}

TEST_CASE("lfsr32 long period spot check") {
    const uint32_t seed = 0x12345678u;
    uint32_t s = seed;
    bool returned = false;
    for (long i = 0; i < 100000000L; ++i) {
        s = detail::lfsr32_step(s);
        if (s == seed) {
            returned = true;
            break;
        }
    }
    CHECK_FALSE(returned);
}

TEST_CASE("lfsr12 tap rule and maximal period") {
    CHECK(lfsr12_next(0x001) == 0x002);
    CHECK(lfsr12_next(0x800) == 0x001);
    CHECK_THROWS_AS(lfsr12_next(0), std::invalid_argument);
    CHECK_THROWS_AS(lfsr12_next(0x1000), std::invalid_argument);

    // orbit from 1 visits all 4095 nonzero states before repeating
    std::vector<bool> seen(4096, false);
    uint16_t s = 1;
    int steps = 0;
    do {
        REQUIRE(s != 0);
        REQUIRE_FALSE(seen[s]);
        seen[s] = true;
        s = detail::lfsr12_step(s);
        ++steps;
    } while (s != 1);
    CHECK(steps == 4095);
}

TEST_CASE("lane bank seeding") {
    LaneRngBank one(123, 1);
    CHECK(one.lanes() == 1);
    CHECK(one.local_states()[0] != 0);
    CHECK(one.global_state() != 0);

    LaneRngBank big(9, 2048);
    std::set<uint16_t> states(big.local_states().begin(), big.local_states().end());
    CHECK(states.size() == 2048);
    CHECK(states.count(0) == 0);

    CHECK_THROWS_AS(LaneRngBank(1, 4096), std::invalid_argument);
    CHECK_THROWS_AS(LaneRngBank(1, 0), std::invalid_argument);

    // deterministic in (seed, lanes)
    CHECK(LaneRngBank(9, 2048) == big);
    CHECK(LaneRngBank(10, 2048) != big);
}

TEST_CASE("cycle advance touches only the global register") {
    LaneRngBank a(5, 8), b(5, 8);
    const auto locals_before =
        std::vector<uint16_t>(a.local_states().begin(), a.local_states().end());
    a.cycle_advance();
    b.cycle_advance();
    CHECK(a.global_state() == b.global_state());
    CHECK(std::vector<uint16_t>(a.local_states().begin(), a.local_states().end()) ==
          locals_before);

    // the low-12 slice varies over consecutive cycles
    LaneRngBank c(5, 1);
    std::set<uint16_t> slices;
    for (int i = 0; i < 4095; ++i) {
        c.cycle_advance();
        slices.insert(c.global_low12());
    }
    CHECK(slices.size() > 1);
}

TEST_CASE("draw12 mechanics") {
    LaneRngBank bank(77, 4);
    const uint16_t local_before = bank.local_states()[2];
    uint16_t expect_local = local_before;
    for (int k = 0; k < detail::kStepsPerUse; ++k)
        expect_local = detail::lfsr12_step(expect_local);
    const uint16_t r = bank.draw12(2);
    CHECK(bank.local_states()[2] == expect_local);
    CHECK(r == (bank.global_low12() ^ expect_local));
    CHECK_THROWS_AS(bank.draw12(4), std::out_of_range);
    CHECK_THROWS_AS(bank.draw12(-1), std::out_of_range);

    // windows never overlap and both registers keep their full orbits
    CHECK(detail::kStepsPerUse >= 12);
    CHECK(std::gcd(detail::kStepsPerUse, 4095) == 1);
}

TEST_CASE("draw12 uniformity over 1e6 draws") {
    LaneRngBank bank(1, 1);
    const int n = 1000000;
    std::vector<int> freq(4096, 0);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        bank.cycle_advance();
        const uint16_t r = bank.draw12(0);
        ++freq[r];
        sum += r;
    }
    const double mean = sum / n;
    const double sigma_mean = (4096.0 / std::sqrt(12.0)) / std::sqrt(double(n));
    CHECK(std::fabs(mean - 2047.5) <= 3.0 * sigma_mean);

    const double expect = double(n) / 4096.0;
    const double sigma = std::sqrt(expect * (1.0 - 1.0 / 4096.0));
    for (int v = 0; v < 4096; ++v) CHECK(std::fabs(freq[v] - expect) <= 5.0 * sigma);
}

TEST_CASE("draw sequences are reproducible") {
    LaneRngBank a(42, 3), b(42, 3);
    for (int i = 0; i < 1000; ++i) {
        a.cycle_advance();
        b.cycle_advance();
        for (int lane = 0; lane < 3; ++lane) REQUIRE(a.draw12(lane) == b.draw12(lane));
    }
}

TEST_CASE("bit packing") {
    CHECK(pack_bits(Bitstream(8, 1)) == std::vector<uint8_t>{0xFF});
    const auto two = pack_bits(Bitstream(12, 1));
    REQUIRE(two.size() == 2);
    CHECK(two[0] == 0xFF);
    CHECK(two[1] == 0x0F);  // top 4 bits of the second byte zero

    const Bitstream bits = combined_stream(3, 77);
    CHECK(unpack_bits(pack_bits(bits), bits.size()) == bits);
}

TEST_CASE("bitstream export") {
    namespace fs = std::filesystem;
    const auto path = (fs::temp_directory_path() / "ising_rng_export.bin").string();
    const Bitstream bits = combined_stream(5, 1001);
    export_bitstream(bits, path);

    std::ifstream is(path, std::ios::binary);
    std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(is)),
                               std::istreambuf_iterator<char>());
    CHECK(bytes.size() == (1001 + 7) / 8);
    CHECK(bytes == pack_bits(bits));
    CHECK(unpack_bits(bytes, 1001) == bits);
    fs::remove(path);

    CHECK_THROWS(export_bitstream(bits, "/nonexistent-dir/x.bin"));
    CHECK_THROWS_AS(export_bitstream(Bitstream{}, path), std::invalid_argument);
}

TEST_CASE("generator streams are deterministic and distinct") {
    CHECK(combined_stream(1, 4096) == combined_stream(1, 4096));
    CHECK(lfsr32_stream(1, 4096) == lfsr32_stream(1, 4096));
    CHECK(combined_stream(1, 4096) != combined_stream(2, 4096));
    CHECK(generate_stream(Generator::Combined, 1, 64) == combined_stream(1, 64));
    CHECK(generate_stream(Generator::Lfsr32Only, 1, 64) == lfsr32_stream(1, 64));
}
