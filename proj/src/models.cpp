#include "ising/models.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "ising/common.hpp"

namespace ising {

namespace {

void check_even_sum(int v, const char* what) {
    if (v < -4 || v > 4 || v % 2 != 0)
        throw std::invalid_argument(std::string(what) + " must be in {-4,-2,0,2,4}, got " +
                                    std::to_string(v));
}

}  // namespace

int epsilon_nn(int s0, int nbr_sum) {
    if (s0 != 1 && s0 != -1) throw std::invalid_argument("spin must be +-1");
    check_even_sum(nbr_sum, "neighbor sum");
    return s0 * nbr_sum;
}

double epsilon_j1j2(int s0, int nn_sum, int nnn_sum, double j1, double j2) {
    if (s0 != 1 && s0 != -1) throw std::invalid_argument("spin must be +-1");
    check_even_sum(nn_sum, "NN sum");
    check_even_sum(nnn_sum, "NNN sum");
    if (!(j1 > 0.0)) throw std::invalid_argument("J1 must be > 0");
    // J2 = 0 is the degenerate boundary where the model collapses to NN Ising
    if (!(j2 <= 0.0)) throw std::invalid_argument("J2 must be <= 0");
    return (j1 * nn_sum + j2 * nnn_sum) * s0;
}

double total_energy_j1j2(const SpinLattice& lat, double j1, double j2) {
    return -j1 * double(lat.nn_bond_sum()) - j2 * double(lat.nnn_bond_sum());
}

void j1j2_mcs(SpinLattice& lat, LaneRngBank& bank, const J1J2Table& table,
              const std::array<std::vector<Site>, 4>& partition, int lane_budget) {
    const int L = lat.side();
    if (!partition[0].empty() && int(partition[0].size()) * 4 != lat.sites())
        throw std::invalid_argument("partition does not match lattice size");
    if (lane_budget < 1 || lane_budget > bank.lanes())
        throw std::invalid_argument("lane budget exceeds bank capacity");
    for (const auto& sites : partition) {
        for (size_t base = 0; base < sites.size(); base += size_t(lane_budget)) {
            bank.cycle_advance();
            const size_t end = std::min(sites.size(), base + size_t(lane_budget));
            for (size_t idx = base; idx < end; ++idx) {
                const auto [i, j] = sites[idx];
                const uint16_t r = bank.draw12(int(idx - base));
                const int s0 = lat.bit(i, j) ? 1 : -1;
                const int up = i == 0 ? L - 1 : i - 1;
                const int dn = i == L - 1 ? 0 : i + 1;
                const int lf = j == 0 ? L - 1 : j - 1;
                const int rt = j == L - 1 ? 0 : j + 1;
                const int nn = (lat.bit(up, j) ? 1 : -1) + (lat.bit(dn, j) ? 1 : -1) +
                               (lat.bit(i, lf) ? 1 : -1) + (lat.bit(i, rt) ? 1 : -1);
                const int nnn = (lat.bit(up, lf) ? 1 : -1) + (lat.bit(up, rt) ? 1 : -1) +
                                (lat.bit(dn, lf) ? 1 : -1) + (lat.bit(dn, rt) ? 1 : -1);
                const int enn = s0 * nn;
                const int ennn = s0 * nnn;
                if (table.flip_is_free(enn, ennn) || r < table.threshold(enn, ennn))
                    lat.flip(i, j);
            }
        }
    }
}

PottsLattice::PottsLattice(int side, int q, Init init, uint64_t seed)
    : side_(side), q_(q) {
    if (side < 4 || side % 2 != 0)
        throw std::invalid_argument("lattice side must be even and >= 4");
    if (q < 2 || q > 255) throw std::invalid_argument("q must be in [2, 255]");
    cells_.assign(size_t(side) * side, 1);
    if (init == Init::Random) {
        SplitMix64 sm(seed);
        for (auto& c : cells_) c = uint8_t(1 + sm.next() % uint64_t(q));
    }
}

int PottsLattice::state(int i, int j) const {
    if (i < 0 || i >= side_ || j < 0 || j >= side_)
        throw std::out_of_range("Potts site index out of range");
    return at(i, j);
}

void PottsLattice::set_state(int i, int j, int value) {
    if (i < 0 || i >= side_ || j < 0 || j >= side_)
        throw std::out_of_range("Potts site index out of range");
    if (value < 1 || value > q_) throw std::invalid_argument("state must be in [1, q]");
    put(i, j, uint8_t(value));
}

int64_t PottsLattice::order_numerator() const noexcept {
    std::array<int64_t, 256> counts{};
    for (const uint8_t c : cells_) ++counts[c];
    int64_t best = 0;
    for (int s = 1; s <= q_; ++s) best = std::max(best, counts[size_t(s)]);
    return int64_t(q_) * best - sites();
}

int potts_propose(int s0, int q, uint16_t r12) {
    if (q < 2) throw std::invalid_argument("q must be >= 2");
    if (s0 < 1 || s0 > q) throw std::invalid_argument("state must be in [1, q]");
    if (r12 > 4095) throw std::invalid_argument("draw must be 12-bit");
    const int idx = int((uint32_t(r12) * uint32_t(q - 1)) >> 12);  // [0, q-2]
    return idx < s0 - 1 ? idx + 1 : idx + 2;
}

int potts_delta_same(int s0, int s_prop, const std::array<int, 4>& neighbor_states) {
    if (s0 == s_prop) throw std::invalid_argument("proposal must differ from current state");
    int n0 = 0, np = 0;
    for (const int s : neighbor_states) {
        n0 += s == s0;
        np += s == s_prop;
    }
    return n0 - np;
}

double potts_energy(const PottsLattice& lat, double coupling) {
    const int L = lat.side();
    int64_t same = 0;
    for (int i = 0; i < L; ++i) {
        const int dn = i == L - 1 ? 0 : i + 1;
        for (int j = 0; j < L; ++j) {
            const int rt = j == L - 1 ? 0 : j + 1;
            same += lat.at(i, j) == lat.at(i, rt);
            same += lat.at(i, j) == lat.at(dn, j);
        }
    }
    return -coupling * double(same);
}

void potts_mcs(PottsLattice& lat, LaneRngBank& bank, const PottsTable& table,
               const std::array<std::vector<Site>, 2>& partition, int lane_budget) {
    const int L = lat.side();
    const int q = lat.states();
    if (lane_budget < 1 || lane_budget > bank.lanes())
        throw std::invalid_argument("lane budget exceeds bank capacity");
    for (const auto& sites : partition) {
        for (size_t base = 0; base < sites.size(); base += size_t(lane_budget)) {
            bank.cycle_advance();
            const size_t end = std::min(sites.size(), base + size_t(lane_budget));
            for (size_t idx = base; idx < end; ++idx) {
                const auto [i, j] = sites[idx];
                const int lane = int(idx - base);
                const uint16_t r_prop = bank.draw12(lane);
                const uint16_t r_acc = bank.draw12(lane);
                const int s0 = lat.at(i, j);
                const int sp = potts_propose(s0, q, r_prop);
                const int up = i == 0 ? L - 1 : i - 1;
                const int dn = i == L - 1 ? 0 : i + 1;
                const int lf = j == 0 ? L - 1 : j - 1;
                const int rt = j == L - 1 ? 0 : j + 1;
                const std::array<int, 4> nbrs = {lat.at(up, j), lat.at(dn, j),
                                                 lat.at(i, lf), lat.at(i, rt)};
                const int k = potts_delta_same(s0, sp, nbrs);  // dE = J*k
                if (k <= 0 || r_acc < table.threshold(k)) lat.put(i, j, uint8_t(sp));
            }
        }
    }
}

}  // namespace ising
