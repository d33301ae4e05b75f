#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "ising/lattice.hpp"
#include "ising/rng.hpp"
#include "ising/table.hpp"

namespace ising {

// eps = S0 * (sum of four NN); the flip costs dE = 2*eps.
int epsilon_nn(int s0, int nbr_sum);

// eps' = (J1*nn_sum + J2*nnn_sum) * S0; the flip costs dE = 2*eps'.
double epsilon_j1j2(int s0, int nn_sum, int nnn_sum, double j1, double j2);

// Full J1/J2 Hamiltonian: -J1*sum over NN bonds - J2*sum over NNN bonds.
double total_energy_j1j2(const SpinLattice& lat, double j1, double j2);

// One Monte Carlo step of the binary J1/J2 model: four sublattice sweeps
// (same-color sites share neither NN nor NNN bonds), lane discipline as in the
// NN kernel: per block of at most lane_budget sites the global LFSR advances
// once and each site draws on its own lane.
void j1j2_mcs(SpinLattice& lat, LaneRngBank& bank, const J1J2Table& table,
              const std::array<std::vector<Site>, 4>& partition, int lane_budget);

// q-state Potts configuration, states in [1, q].
class PottsLattice {
public:
    PottsLattice(int side, int q, Init init, uint64_t seed = 0);

    int side() const noexcept { return side_; }
    int states() const noexcept { return q_; }
    int64_t sites() const noexcept { return int64_t(side_) * side_; }

    int state(int i, int j) const;
    void set_state(int i, int j, int value);

    uint8_t at(int i, int j) const noexcept { return cells_[size_t(i) * side_ + j]; }
    void put(int i, int j, uint8_t v) noexcept { cells_[size_t(i) * side_ + j] = v; }

    // q * (count of the most common state) - N; the Potts order parameter is
    // this over N*(q-1): 1 in a uniform state, 0 when all states are equally
    // populated.
    int64_t order_numerator() const noexcept;

    bool operator==(const PottsLattice&) const = default;

private:
    int side_;
    int q_;
    std::vector<uint8_t> cells_;
};

// Uniform choice among the q-1 states different from s0, driven by one 12-bit
// draw (multiply-shift; selection bias <= 1/4096 per state).
int potts_propose(int s0, int q, uint16_t r12);

// dE = J * (n_same(s0) - n_same(s_prop)) over the four NN states.
int potts_delta_same(int s0, int s_prop, const std::array<int, 4>& neighbor_states);

// -J * (number of equal NN pairs), each of the 2N bonds once.
double potts_energy(const PottsLattice& lat, double coupling);

// One Potts MCS: checkerboard half-sweeps; every trial consumes two draws on
// its lane (proposal first, then acceptance).
void potts_mcs(PottsLattice& lat, LaneRngBank& bank, const PottsTable& table,
               const std::array<std::vector<Site>, 2>& partition, int lane_budget);

}  // namespace ising
