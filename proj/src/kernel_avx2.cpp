#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include "ising/kernel.hpp"

// Vector variant of the lane update: 16 lanes per 256-bit register, one
// 16-bit SIMD lane per site. Consumes lanes and draws in exactly the same
// order as the scalar kernel, so the two are bit-for-bit interchangeable.

namespace ising::detail {

namespace {

// 0/1 per 16-bit lane from a 16-bit mask (lane k = bit k of m).
inline __m256i expand_mask16(uint32_t m) {
    const __m256i bitsel = _mm256_setr_epi16(
        1, 2, 4, 8, 16, 32, 64, 128, 256, 512, 1024, 2048, 4096, 8192, 16384,
        short(0x8000u));
    const __m256i v = _mm256_and_si256(_mm256_set1_epi16(short(m)), bitsel);
    return _mm256_min_epu16(v, _mm256_set1_epi16(1));
}

// Even-position bits of a 32-bit window -> 16 consecutive bits.
inline uint32_t even_bits(uint32_t w) { return _pext_u32(w, 0x55555555u); }

}  // namespace

void half_sweep_avx2(SpinLattice& lat, Color color, LaneRngBank& bank,
                     const BoltzmannTable& table, const RowBlockSchedule& schedule) {
    const int L = lat.side();
    const int half_row = L / 2;
    const int groups = half_row / 16;
    const int tail = half_row % 16;
    const auto& entries = table.entries();

    const __m256i vone = _mm256_set1_epi16(1);
    const __m256i vfour = _mm256_set1_epi16(4);
    const __m256i vthree = _mm256_set1_epi16(3);
    const __m256i vmask12 = _mm256_set1_epi16(0x0FFF);
    const __m256i vthr3 = _mm256_set1_epi16(short(entries[3]));
    const __m256i vthr4 = _mm256_set1_epi16(short(entries[4]));

    uint16_t* locals = bank.local_data();

    for (const RowBlock& step : schedule.steps(color)) {
        bank.cycle_advance();
        const uint16_t g12 = bank.global_low12();
        const __m256i vg12 = _mm256_set1_epi16(short(g12));
        int lane = 0;
        for (int i = step.row_begin; i < step.row_begin + step.row_count; ++i) {
            const uint64_t* top = lat.row(i == 0 ? L - 1 : i - 1);
            const uint64_t* bot = lat.row(i == L - 1 ? 0 : i + 1);
            uint64_t* mid = lat.row(i);
            const int parity = (i + int(color)) & 1;

            for (int g = 0; g < groups; ++g, lane += 16) {
                const int q = parity + 32 * g;  // window start column

                const uint32_t midw = uint32_t(read_bits64_cyclic(mid, L, q));
                const uint32_t topw = uint32_t(read_bits64_cyclic(top, L, q));
                const uint32_t botw = uint32_t(read_bits64_cyclic(bot, L, q));
                const uint32_t lftw =
                    uint32_t(read_bits64_cyclic(mid, L, q == 0 ? L - 1 : q - 1));
                const uint32_t rgtw = uint32_t(read_bits64_cyclic(mid, L, q + 1));

                // advance 16 local LFSRs a full window and form the draws
                __m256i s = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(locals + lane));
                for (int step = 0; step < kStepsPerUse; ++step) {
                    __m256i fb =
                        _mm256_xor_si256(_mm256_srli_epi16(s, 11), _mm256_srli_epi16(s, 10));
                    fb = _mm256_xor_si256(fb, _mm256_srli_epi16(s, 9));
                    fb = _mm256_xor_si256(fb, _mm256_srli_epi16(s, 3));
                    fb = _mm256_and_si256(fb, vone);
                    s = _mm256_and_si256(_mm256_or_si256(_mm256_slli_epi16(s, 1), fb), vmask12);
                }
                _mm256_storeu_si256(reinterpret_cast<__m256i*>(locals + lane), s);
                const __m256i r = _mm256_xor_si256(s, vg12);

                // neighbor up-spin count and table index k = (eps+4)/2
                const __m256i cnt = _mm256_add_epi16(
                    _mm256_add_epi16(expand_mask16(even_bits(topw)),
                                     expand_mask16(even_bits(botw))),
                    _mm256_add_epi16(expand_mask16(even_bits(lftw)),
                                     expand_mask16(even_bits(rgtw))));
                const __m256i s0 = expand_mask16(even_bits(midw));
                const __m256i s0_up = _mm256_cmpeq_epi16(s0, vone);
                const __m256i k =
                    _mm256_blendv_epi8(_mm256_sub_epi16(vfour, cnt), cnt, s0_up);

                // threshold only matters for k in {3,4}
                const __m256i thr =
                    _mm256_blendv_epi8(vthr4, vthr3, _mm256_cmpeq_epi16(k, vthree));
                const __m256i accept = _mm256_or_si256(_mm256_cmpgt_epi16(vthree, k),
                                                       _mm256_cmpgt_epi16(thr, r));

                const uint32_t bytemask = uint32_t(_mm256_movemask_epi8(accept));
                const uint32_t flips16 = even_bits(bytemask);
                mid[q >> 6] ^= uint64_t(_pdep_u32(flips16, 0x55555555u)) << (q & 63);
            }

            // remainder sites of the row, scalar
            for (int o = 0; o < tail; ++o, ++lane) {
                const int j = parity + 2 * (groups * 16 + o);
                const uint16_t s = lfsr12_window(locals[lane]);
                locals[lane] = s;
                const uint16_t r = uint16_t(g12 ^ s);
                const int jl = j == 0 ? L - 1 : j - 1;
                const int jr = j == L - 1 ? 0 : j + 1;
                const int ones = int((top[j >> 6] >> (j & 63)) & 1) +
                                 int((bot[j >> 6] >> (j & 63)) & 1) +
                                 int((mid[jl >> 6] >> (jl & 63)) & 1) +
                                 int((mid[jr >> 6] >> (jr & 63)) & 1);
                const bool s0_up = (mid[j >> 6] >> (j & 63)) & 1;
                const int k = s0_up ? ones : 4 - ones;
                if (k <= 2 || r < entries[size_t(k)]) mid[j >> 6] ^= uint64_t(1) << (j & 63);
            }
        }
    }
}

}  // namespace ising::detail

#endif  // x86_64
