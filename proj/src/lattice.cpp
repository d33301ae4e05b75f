#include "ising/lattice.hpp"

#include <bit>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "ising/common.hpp"

namespace ising {

const char* model_name(Model m) {
    switch (m) {
        case Model::NnIsing: return "ising";
        case Model::J1J2: return "j1j2";
        case Model::Potts: return "potts";
    }
    return "?";
}

void ModelParams::validate() const {
    if (T <= 0.0) throw UsageError("T must be > 0");
    if (model == Model::J1J2) {
        if (!(J1 > 0.0)) throw UsageError("J1 must be > 0");
        if (!(J2 < 0.0)) throw UsageError("J2 must be < 0");
    }
    if (model == Model::Potts) {
        if (q < 2) throw UsageError("q must be >= 2");
        if (q > 255) throw UsageError("q must be <= 255");
        if (!(J > 0.0)) throw UsageError("J must be > 0 for the Potts model");
    }
}

namespace {

uint64_t row_mask_tail(int side) {
    const int rem = side & 63;
    return rem == 0 ? ~uint64_t(0) : ((uint64_t(1) << rem) - 1);
}

}  // namespace

SpinLattice::SpinLattice(int side, Init init, uint64_t seed)
    : side_(side), words_per_row_((side + 63) / 64) {
    if (side < 4 || side % 2 != 0)
        throw std::invalid_argument("lattice side must be even and >= 4, got " +
                                    std::to_string(side));
    words_.assign(int64_t(side_) * words_per_row_, 0);
    const uint64_t tail = row_mask_tail(side_);
    if (init == Init::AllUp) {
        for (int i = 0; i < side_; ++i) {
            uint64_t* r = row(i);
            for (int w = 0; w < words_per_row_; ++w) r[w] = ~uint64_t(0);
            r[words_per_row_ - 1] = tail;
        }
    } else {
        SplitMix64 sm(seed);
        for (int i = 0; i < side_; ++i) {
            uint64_t* r = row(i);
            for (int w = 0; w < words_per_row_; ++w) r[w] = sm.next();
            r[words_per_row_ - 1] &= tail;
        }
    }
}

void SpinLattice::check_index(int i, int j) const {
    if (i < 0 || i >= side_ || j < 0 || j >= side_)
        throw std::out_of_range("site (" + std::to_string(i) + "," + std::to_string(j) +
                                ") outside " + std::to_string(side_) + "x" +
                                std::to_string(side_) + " lattice");
}

int SpinLattice::spin(int i, int j) const {
    check_index(i, j);
    return bit(i, j) ? 1 : -1;
}

void SpinLattice::set_spin(int i, int j, int value) {
    check_index(i, j);
    if (value != 1 && value != -1) throw std::invalid_argument("spin value must be +-1");
    const bool want = value == 1;
    if (bit(i, j) != want) flip(i, j);
}

int SpinLattice::neighbor_sum(int i, int j) const {
    check_index(i, j);
    const int L = side_;
    const int up = i == 0 ? L - 1 : i - 1;
    const int dn = i == L - 1 ? 0 : i + 1;
    const int lf = j == 0 ? L - 1 : j - 1;
    const int rt = j == L - 1 ? 0 : j + 1;
    const int ones = bit(up, j) + bit(dn, j) + bit(i, lf) + bit(i, rt);
    return 2 * ones - 4;
}

int SpinLattice::next_neighbor_sum(int i, int j) const {
    check_index(i, j);
    const int L = side_;
    const int up = i == 0 ? L - 1 : i - 1;
    const int dn = i == L - 1 ? 0 : i + 1;
    const int lf = j == 0 ? L - 1 : j - 1;
    const int rt = j == L - 1 ? 0 : j + 1;
    const int ones = bit(up, lf) + bit(up, rt) + bit(dn, lf) + bit(dn, rt);
    return 2 * ones - 4;
}

int64_t SpinLattice::magnetization() const noexcept {
    int64_t ones = 0;
    for (const uint64_t w : words_) ones += std::popcount(w);
    return 2 * ones - sites();
}

namespace {

// Number of anti-aligned bonds between an L-bit row and its cyclic shift by
// one column (for horizontal bonds) or another row (for vertical ones).
int64_t row_mismatch(const uint64_t* a, const uint64_t* b, int side, int words) {
    int64_t anti = 0;
    for (int w = 0; w < words; ++w) anti += std::popcount(a[w] ^ b[w]);
    (void)side;
    return anti;
}

int64_t row_mismatch_shift1(const uint64_t* a, int side, int words) {
    // compare bit j with bit (j+1) mod side
    int64_t anti = 0;
    for (int w = 0; w < words; ++w) {
        uint64_t shifted = a[w] >> 1;
        const int bits_here = (w == words - 1) ? side - 64 * w : 64;
        // bit coming in from the next position
        uint64_t in;
        if (bits_here == 64) {
            in = (w + 1 < words) ? (a[w + 1] & 1) : (a[0] & 1);
            shifted |= in << 63;
            anti += std::popcount((a[w] ^ shifted));
        } else {
            in = a[0] & 1;  // wrap to column 0
            shifted |= in << (bits_here - 1);
            const uint64_t mask = (bits_here == 64) ? ~uint64_t(0)
                                                    : ((uint64_t(1) << bits_here) - 1);
            anti += std::popcount((a[w] ^ shifted) & mask);
        }
    }
    return anti;
}

}  // namespace

int64_t SpinLattice::nn_bond_sum() const noexcept {
    const int L = side_;
    int64_t anti = 0;
    for (int i = 0; i < L; ++i) {
        anti += row_mismatch_shift1(row(i), L, words_per_row_);
        anti += row_mismatch(row(i), row(i == L - 1 ? 0 : i + 1), L, words_per_row_);
    }
    return 2 * sites() - 2 * anti;  // aligned - anti with aligned + anti = 2N
}

int64_t SpinLattice::nnn_bond_sum() const noexcept {
    // Diagonal bonds, each counted once via (i,j)-(i+1,j+1) and (i,j)-(i+1,j-1).
    const int L = side_;
    int64_t sum = 0;
    for (int i = 0; i < L; ++i) {
        const int dn = i == L - 1 ? 0 : i + 1;
        for (int j = 0; j < L; ++j) {
            const int lf = j == 0 ? L - 1 : j - 1;
            const int rt = j == L - 1 ? 0 : j + 1;
            const int s = bit(i, j) ? 1 : -1;
            sum += s * ((bit(dn, rt) ? 1 : -1) + (bit(dn, lf) ? 1 : -1));
        }
    }
    return sum;
}

double total_energy_nn(const SpinLattice& lat, const ModelParams& params) {
    if (params.model != Model::NnIsing)
        throw std::invalid_argument("total_energy_nn requires the NN Ising model");
    return -params.J * double(lat.nn_bond_sum());
}

int64_t total_magnetization(const SpinLattice& lat) noexcept { return lat.magnetization(); }

std::array<std::vector<Site>, 2> checkerboard_partition(int side) {
    if (side < 4 || side % 2 != 0)
        throw std::invalid_argument("checkerboard partition requires even side >= 4");
    std::array<std::vector<Site>, 2> out;
    out[0].reserve(size_t(side) * side / 2);
    out[1].reserve(size_t(side) * side / 2);
    for (int i = 0; i < side; ++i)
        for (int j = 0; j < side; ++j) out[(i + j) & 1].emplace_back(i, j);
    return out;
}

std::array<std::vector<Site>, 4> four_color_partition(int side) {
    if (side < 4 || side % 2 != 0)
        throw std::invalid_argument("four-color partition requires even side >= 4");
    std::array<std::vector<Site>, 4> out;
    for (auto& v : out) v.reserve(size_t(side) * side / 4);
    for (int i = 0; i < side; ++i)
        for (int j = 0; j < side; ++j) out[2 * (i & 1) + (j & 1)].emplace_back(i, j);
    return out;
}

void write_snapshot(const SpinLattice& lat, std::ostream& os) {
    os << "L=" << lat.side() << '\n';
    for (int i = 0; i < lat.side(); ++i) {
        for (int j = 0; j < lat.side(); ++j) os << (lat.bit(i, j) ? '+' : '-');
        os << '\n';
    }
}

SpinLattice read_snapshot(std::istream& is) {
    std::string header;
    if (!std::getline(is, header) || header.rfind("L=", 0) != 0)
        throw std::runtime_error("snapshot: missing L= header");
    const int side = std::stoi(header.substr(2));
    SpinLattice lat(side, Init::AllUp);
    std::string line;
    for (int i = 0; i < side; ++i) {
        if (!std::getline(is, line) || int(line.size()) < side)
            throw std::runtime_error("snapshot: truncated at row " + std::to_string(i));
        for (int j = 0; j < side; ++j) {
            if (line[j] == '-') lat.flip(i, j);
            else if (line[j] != '+')
                throw std::runtime_error("snapshot: bad character in row " + std::to_string(i));
        }
    }
    return lat;
}

}  // namespace ising
