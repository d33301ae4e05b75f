#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace ising {

inline constexpr int kFixedPointScale = 4096;  // 12-bit acceptance thresholds

// Rounded 12-bit threshold for a flip costing dE > 0 at temperature T:
// min(4095, round(4096 * exp(-dE / T))). The comparator "r < threshold"
// realizes acceptance probability threshold/4096.
uint16_t fixed_point_threshold(double delta_e, double temperature);

// Five-entry acceptance table for the NN Ising model, indexed by
// k = (eps + 4) / 2 with eps = S0 * (sum of four neighbors) and dE = 2*eps.
// Entries for eps <= 0 are stored saturated (4095); the dE <= 0 comparator
// path accepts those flips before the table is consulted.
class BoltzmannTable {
public:
    static BoltzmannTable build(double temperature);  // throws on T <= 0

    uint16_t entry(int eps) const;  // eps in {-4,-2,0,2,4}, else throws
    const std::array<uint16_t, 5>& entries() const noexcept { return entries_; }
    double temperature() const noexcept { return temperature_; }

private:
    std::array<uint16_t, 5> entries_{};
    double temperature_ = 0.0;
};

// Expanded table for the J1/J2 model: one threshold per attainable
// (S0*nn_sum, S0*nnn_sum) pair, with eps' = J1*eps_nn + J2*eps_nnn and
// dE = 2*eps'.
class J1J2Table {
public:
    static J1J2Table build(double temperature, double j1, double j2);

    uint16_t threshold(int eps_nn, int eps_nnn) const;   // both in {-4,-2,0,2,4}
    bool flip_is_free(int eps_nn, int eps_nnn) const;    // eps' <= 0
    double eps_prime(int eps_nn, int eps_nnn) const;

    // Distinct attainable eps' > 0 values, ascending.
    std::vector<double> positive_eps_values() const;

    double temperature() const noexcept { return temperature_; }
    double j1() const noexcept { return j1_; }
    double j2() const noexcept { return j2_; }

private:
    static int grid_index(int eps_nn, int eps_nnn);
    std::array<uint16_t, 25> thresholds_{};
    std::array<bool, 25> free_{};
    double temperature_ = 0.0, j1_ = 0.0, j2_ = 0.0;
};

// Potts thresholds for dE = J*k, k = 1..4 (k = 0 and negative k are the
// free-flip comparator path).
class PottsTable {
public:
    static PottsTable build(double temperature, double coupling);
    uint16_t threshold(int k) const;  // k in [1,4]
    double temperature() const noexcept { return temperature_; }

private:
    std::array<uint16_t, 4> thresholds_{};
    double temperature_ = 0.0;
};

}  // namespace ising
