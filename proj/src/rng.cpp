#include "ising/rng.hpp"

#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ising/common.hpp"

namespace ising {

uint32_t lfsr32_next(uint32_t state) {
    if (state == 0) throw std::invalid_argument("LFSR32 state must be nonzero");
    return detail::lfsr32_step(state);
}

uint16_t lfsr12_next(uint16_t state) {
    if (state == 0 || state > 0x0FFF)
        throw std::invalid_argument("LFSR12 state must be in [1, 4095]");
    return detail::lfsr12_step(state);
}

LaneRngBank::LaneRngBank(uint64_t master_seed, int n_lanes) {
    if (n_lanes < 1) throw std::invalid_argument("lane count must be >= 1");
    if (n_lanes > 4095)
        throw std::invalid_argument("lane count must be <= 4095 (only 4095 distinct "
                                    "nonzero 12-bit states exist)");
    SplitMix64 sm(master_seed);
    uint64_t digest = sm.next();
    global_ = uint32_t(digest ^ (digest >> 32));
    while (global_ == 0) global_ = uint32_t(sm.next());

    // Locals: iterate the global register 32 steps per candidate and keep the
    // low 12 bits, skipping zero and repeats.
    locals_.reserve(size_t(n_lanes));
    std::vector<bool> seen(4096, false);
    while (int(locals_.size()) < n_lanes) {
        for (int k = 0; k < 32; ++k) global_ = detail::lfsr32_step(global_);
        const uint16_t cand = uint16_t(global_ & 0x0FFF);
        if (cand == 0 || seen[cand]) continue;
        seen[cand] = true;
        locals_.push_back(cand);
    }
}

uint16_t LaneRngBank::draw12(int lane) {
    if (lane < 0 || lane >= lanes())
        throw std::out_of_range("lane " + std::to_string(lane) + " out of range [0, " +
                                std::to_string(lanes()) + ")");
    uint16_t s = detail::lfsr12_window(locals_[size_t(lane)]);
    locals_[size_t(lane)] = s;
    return uint16_t(global_low12() ^ s);
}

const char* generator_name(Generator g) {
    return g == Generator::Combined ? "combined" : "lfsr32";
}

Bitstream combined_stream(uint64_t master_seed, size_t n_bits) {
    // XOR of the two registers' output-bit sequences: one shift each per
    // emitted bit. Seeded exactly like a one-lane bank.
    const LaneRngBank bank(master_seed, 1);
    uint32_t g = bank.global_state();
    uint16_t l = bank.local_states()[0];
    Bitstream out(n_bits);
    for (size_t i = 0; i < n_bits; ++i) {
        g = detail::lfsr32_step(g);
        l = detail::lfsr12_step(l);
        out[i] = uint8_t((g ^ l) & 1u);
    }
    return out;
}

Bitstream lfsr32_stream(uint64_t master_seed, size_t n_bits) {
    // Same state digest as the bank so both generators start comparably.
    SplitMix64 sm(master_seed);
    uint64_t digest = sm.next();
    uint32_t s = uint32_t(digest ^ (digest >> 32));
    while (s == 0) s = uint32_t(sm.next());
    Bitstream out(n_bits);
    for (size_t i = 0; i < n_bits; ++i) {
        s = detail::lfsr32_step(s);
        out[i] = uint8_t(s & 1u);
    }
    return out;
}

Bitstream generate_stream(Generator g, uint64_t master_seed, size_t n_bits) {
    return g == Generator::Combined ? combined_stream(master_seed, n_bits)
                                    : lfsr32_stream(master_seed, n_bits);
}

std::vector<uint8_t> pack_bits(const Bitstream& bits) {
    std::vector<uint8_t> bytes((bits.size() + 7) / 8, 0);
    for (size_t i = 0; i < bits.size(); ++i)
        if (bits[i]) bytes[i >> 3] |= uint8_t(1u << (i & 7));
    return bytes;
}

Bitstream unpack_bits(std::span<const uint8_t> bytes, size_t n_bits) {
    if (bytes.size() * 8 < n_bits)
        throw std::invalid_argument("byte buffer shorter than requested bit count");
    Bitstream bits(n_bits);
    for (size_t i = 0; i < n_bits; ++i) bits[i] = (bytes[i >> 3] >> (i & 7)) & 1u;
    return bits;
}

void export_bitstream(const Bitstream& bits, const std::string& path) {
    if (bits.empty()) throw std::invalid_argument("refusing to export an empty bitstream");
    const auto bytes = pack_bits(bits);
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    os.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
    if (!os) throw std::runtime_error("short write to " + path);
}

}  // namespace ising
