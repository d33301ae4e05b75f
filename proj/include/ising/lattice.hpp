#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

namespace ising {

enum class Model { NnIsing, J1J2, Potts };
enum class Init { AllUp, Random };
enum class Color : int { Black = 0, White = 1 };

const char* model_name(Model m);

struct ModelParams {
    Model model = Model::NnIsing;
    double J = 1.0;    // NN Ising / Potts coupling
    double J1 = 1.0;   // J1/J2 nearest-neighbor coupling, > 0
    double J2 = -0.5;  // J1/J2 next-nearest-neighbor coupling, < 0
    int q = 2;         // Potts state count, >= 2
    double T = 2.5;    // temperature, k_B = 1; external field fixed at 0

    void validate() const;  // throws UsageError on violated constraints
};

using Site = std::pair<int, int>;

// L x L spin grid with periodic boundaries, one bit per site packed row-major
// into 64-bit words (bit 0 -> spin -1, bit 1 -> spin +1). Padding bits in the
// last word of each row stay zero.
class SpinLattice {
public:
    SpinLattice(int side, Init init, uint64_t seed = 0);

    int side() const noexcept { return side_; }
    int64_t sites() const noexcept { return int64_t(side_) * side_; }

    // Bounds-checked site access in {-1, +1}.
    int spin(int i, int j) const;
    void set_spin(int i, int j, int value);

    // Sum of the four nearest neighbors with torus wrapping; in {-4,...,4}.
    int neighbor_sum(int i, int j) const;
    // Sum of the four next-nearest (diagonal) neighbors.
    int next_neighbor_sum(int i, int j) const;

    int64_t magnetization() const noexcept;   // sum of all spins
    int64_t nn_bond_sum() const noexcept;     // sum of S_i*S_j over the 2N NN bonds
    int64_t nnn_bond_sum() const noexcept;    // same over the 2N diagonal bonds

    // Unchecked raw access for the update kernels.
    int words_per_row() const noexcept { return words_per_row_; }
    uint64_t* row(int i) noexcept { return words_.data() + int64_t(i) * words_per_row_; }
    const uint64_t* row(int i) const noexcept {
        return words_.data() + int64_t(i) * words_per_row_;
    }
    bool bit(int i, int j) const noexcept {
        return (row(i)[j >> 6] >> (j & 63)) & 1u;
    }
    void flip(int i, int j) noexcept { row(i)[j >> 6] ^= uint64_t(1) << (j & 63); }

    bool operator==(const SpinLattice&) const = default;

private:
    int side_;
    int words_per_row_;
    std::vector<uint64_t> words_;

    void check_index(int i, int j) const;
};

// Total energy of Eq.-style NN Hamiltonian, -J * nn_bond_sum. Integer-valued
// when J = 1. Throws on model mismatch.
double total_energy_nn(const SpinLattice& lat, const ModelParams& params);

int64_t total_magnetization(const SpinLattice& lat) noexcept;

// Two-coloring: (i+j) even -> Black. Every NN of a Black site is White.
std::array<std::vector<Site>, 2> checkerboard_partition(int side);

// Four-coloring 2*(i%2) + (j%2): same-color sites are neither NN nor NNN.
std::array<std::vector<Site>, 4> four_color_partition(int side);

// Snapshot text format: header "L=<n>" then L lines of L chars in {+,-}.
void write_snapshot(const SpinLattice& lat, std::ostream& os);
SpinLattice read_snapshot(std::istream& is);

}  // namespace ising
