#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "ising/rng.hpp"

namespace ising {

// Five tests from the NIST SP 800-22 battery. Each returns a p-value in [0,1]
// and throws std::invalid_argument when the stream is too short for the
// statistic to be meaningful.

double monobit_test(const Bitstream& bits);                       // n >= 100
double block_frequency_test(const Bitstream& bits, int block_len);
double runs_test(const Bitstream& bits);                          // n >= 100
double cusum_test(const Bitstream& bits);                         // forward mode
double rank_test(const Bitstream& bits);                          // n >= 38*1024

// Exact rank distribution of a random 32x32 matrix over GF(2):
// {P(rank=32), P(rank=31), P(rank<=30)}.
std::array<double, 3> rank32_probabilities();

inline constexpr double kNistAlpha = 0.01;

struct TestResult {
    std::string name;
    double p_value;
    bool pass;  // p >= kNistAlpha
};

// Runs the full implemented battery on one stream.
std::vector<TestResult> run_battery(const Bitstream& bits, int block_len);

namespace detail {
// Regularized upper incomplete gamma Q(a, x); series + continued fraction.
double regularized_gamma_q(double a, double x);
// Rank over GF(2) of a 32x32 matrix given as 32 row words.
int gf2_rank32(std::array<uint32_t, 32> rows);
}  // namespace detail

}  // namespace ising
