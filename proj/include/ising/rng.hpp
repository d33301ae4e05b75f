#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace ising {

// 32-bit Fibonacci LFSR, taps x^32 + x^22 + x^2 + x + 1, feedback into bit 0.
// The all-zero state is absorbing and therefore forbidden.
uint32_t lfsr32_next(uint32_t state);           // throws on zero state
uint16_t lfsr12_next(uint16_t state);           // taps x^12+x^11+x^10+x^4+1; throws on zero

namespace detail {
inline uint32_t lfsr32_step(uint32_t s) noexcept {
    const uint32_t fb = ((s >> 31) ^ (s >> 21) ^ (s >> 1) ^ s) & 1u;
    return (s << 1) | fb;
}
inline uint16_t lfsr12_step(uint16_t s) noexcept {
    const uint16_t fb = ((s >> 11) ^ (s >> 10) ^ (s >> 9) ^ (s >> 3)) & 1u;
    return ((s << 1) | fb) & 0x0FFF;
}

// Register advance between uses: 16 shifts, so the 12-bit windows consumed by
// consecutive uses never share bits. 16 is coprime to both periods (4095 and
// 2^32-1 are odd), so the decimated sequences still run the full orbits.
inline constexpr int kStepsPerUse = 16;

inline uint16_t lfsr12_window(uint16_t s) noexcept {
    for (int k = 0; k < kStepsPerUse; ++k) s = lfsr12_step(s);
    return s;
}
inline uint32_t lfsr32_window(uint32_t s) noexcept {
    for (int k = 0; k < kStepsPerUse; ++k) s = lfsr32_step(s);
    return s;
}
}  // namespace detail

// One shared 32-bit LFSR plus a 12-bit LFSR per update lane; every lane XORs
// its own 12-bit state with the low 12 bits of the global register. Both
// registers advance a full window (kStepsPerUse shifts) per use — the global
// once per update cycle, a local once per draw. Single-bit shifting would hand
// a lane r' = ((r<<1)|b) & 0xFFF on its next draw and give sibling lanes
// shift-locked XOR offsets; on small lattices, where sites are revisited
// within a few cycles, both effects measurably bias the sampling.
class LaneRngBank {
public:
    LaneRngBank(uint64_t master_seed, int n_lanes);

    int lanes() const noexcept { return int(locals_.size()); }
    uint32_t global_state() const noexcept { return global_; }
    uint16_t global_low12() const noexcept { return uint16_t(global_ & 0x0FFF); }

    void cycle_advance() noexcept { global_ = detail::lfsr32_window(global_); }

    // Advances the lane's local LFSR and returns (global & 0xFFF) ^ local.
    uint16_t draw12(int lane);

    std::span<const uint16_t> local_states() const noexcept { return locals_; }
    uint16_t* local_data() noexcept { return locals_.data(); }

    bool operator==(const LaneRngBank&) const = default;

private:
    uint32_t global_ = 1;
    std::vector<uint16_t> locals_;
};

using Bitstream = std::vector<uint8_t>;  // one bit per element, values 0/1

enum class Generator { Combined, Lfsr32Only };
const char* generator_name(Generator g);

// Test bitstream of the combined generator: one lane; per bit the global
// advances one step, the lane draws, and the low bit of the draw is emitted.
Bitstream combined_stream(uint64_t master_seed, size_t n_bits);

// Bare 32-bit LFSR: low bit of the state after each step.
Bitstream lfsr32_stream(uint64_t master_seed, size_t n_bits);

Bitstream generate_stream(Generator g, uint64_t master_seed, size_t n_bits);

// Packing: 8 bits per byte, bit k of a byte = stream bit 8*byte_index + k.
std::vector<uint8_t> pack_bits(const Bitstream& bits);
Bitstream unpack_bits(std::span<const uint8_t> bytes, size_t n_bits);
void export_bitstream(const Bitstream& bits, const std::string& path);

}  // namespace ising
