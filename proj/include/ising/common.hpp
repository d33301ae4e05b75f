#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ising {

inline constexpr const char* kVersion = "0.1.0";

// Deterministic seed expansion; used everywhere a seed has to become a stream.
struct SplitMix64 {
    uint64_t state;

    explicit SplitMix64(uint64_t seed) : state(seed) {}

    uint64_t next() {
        uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
};

// Thrown by the nonlinear fitter when the iteration budget runs out.
class FitFailure : public std::runtime_error {
public:
    FitFailure(const std::string& what, double last_residual)
        : std::runtime_error(what), last_residual_(last_residual) {}

    double last_residual() const noexcept { return last_residual_; }

private:
    double last_residual_;
};

// Configuration / command-line problems; mapped to exit code 1 by the CLI.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace ising
