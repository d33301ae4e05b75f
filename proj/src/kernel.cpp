#include "ising/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ising {

bool avx2_supported() noexcept {
#if defined(__x86_64__) || defined(_M_X64)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("bmi2");
#else
    return false;
#endif
}

KernelBackend resolve_backend(KernelBackend requested) {
    switch (requested) {
        case KernelBackend::Auto:
            return avx2_supported() ? KernelBackend::Avx2 : KernelBackend::Scalar;
        case KernelBackend::Scalar:
            return KernelBackend::Scalar;
        case KernelBackend::Avx2:
            if (!avx2_supported())
                throw std::runtime_error("AVX2 kernel requested but CPU lacks AVX2/BMI2");
            return KernelBackend::Avx2;
    }
    return KernelBackend::Scalar;
}

const char* backend_name(KernelBackend b) {
    switch (b) {
        case KernelBackend::Auto: return "auto";
        case KernelBackend::Scalar: return "scalar";
        case KernelBackend::Avx2: return "avx2";
    }
    return "?";
}

int update_spin(int s0, int eps, uint16_t r, const BoltzmannTable& table) {
    if (s0 != 1 && s0 != -1) throw std::invalid_argument("spin must be +-1");
    const uint16_t entry = table.entry(eps);  // validates eps
    const bool flip = eps <= 0 || r < entry;
    return flip ? -s0 : s0;
}

namespace detail {

uint64_t read_bits64_cyclic(const uint64_t* row_words, int side, int start) {
    uint64_t out = 0;
    int got = 0;
    int pos = start;
    while (got < 64) {
        const int word = pos >> 6;
        const int off = pos & 63;
        const int avail = std::min(64 - off, side - pos);
        uint64_t chunk = row_words[word] >> off;
        if (avail < 64) chunk &= (uint64_t(1) << avail) - 1;
        out |= chunk << got;
        got += avail;
        pos += avail;
        if (pos == side) pos = 0;
    }
    return out;
}

void half_sweep_scalar(SpinLattice& lat, Color color, LaneRngBank& bank,
                       const BoltzmannTable& table, const RowBlockSchedule& schedule) {
    const int L = lat.side();
    const auto& entries = table.entries();
    uint16_t* locals = bank.local_data();
    for (const RowBlock& step : schedule.steps(color)) {
        bank.cycle_advance();
        const uint16_t g12 = bank.global_low12();
        int lane = 0;
        for (int i = step.row_begin; i < step.row_begin + step.row_count; ++i) {
            const uint64_t* top = lat.row(i == 0 ? L - 1 : i - 1);
            const uint64_t* bot = lat.row(i == L - 1 ? 0 : i + 1);
            uint64_t* mid = lat.row(i);
            const int parity = (i + int(color)) & 1;
            for (int j = parity; j < L; j += 2, ++lane) {
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
                const int k = s0_up ? ones : 4 - ones;  // k = (eps+4)/2
                if (k <= 2 || r < entries[size_t(k)]) mid[j >> 6] ^= uint64_t(1) << (j & 63);
            }
        }
    }
}

}  // namespace detail

void half_sweep(SpinLattice& lat, Color color, LaneRngBank& bank,
                const BoltzmannTable& table, const RowBlockSchedule& schedule,
                KernelBackend backend) {
    if (schedule.side() != lat.side())
        throw std::invalid_argument("schedule built for side " +
                                    std::to_string(schedule.side()) + ", lattice has " +
                                    std::to_string(lat.side()));
    if (bank.lanes() < schedule.lanes_used())
        throw std::invalid_argument("RNG bank has " + std::to_string(bank.lanes()) +
                                    " lanes, schedule needs " +
                                    std::to_string(schedule.lanes_used()));
    switch (resolve_backend(backend)) {
#if defined(__x86_64__) || defined(_M_X64)
        case KernelBackend::Avx2:
            detail::half_sweep_avx2(lat, color, bank, table, schedule);
            return;
#endif
        default:
            detail::half_sweep_scalar(lat, color, bank, table, schedule);
            return;
    }
}

void mcs(SpinLattice& lat, LaneRngBank& bank, const BoltzmannTable& table,
         const RowBlockSchedule& schedule, KernelBackend backend) {
    const KernelBackend resolved = resolve_backend(backend);
    half_sweep(lat, Color::Black, bank, table, schedule, resolved);
    half_sweep(lat, Color::White, bank, table, schedule, resolved);
}

void sequential_mcs_reference(SpinLattice& lat, std::mt19937_64& rng, double temperature) {
    if (temperature <= 0.0) throw std::invalid_argument("temperature must be > 0");
    const int L = lat.side();
    const int64_t n = lat.sites();
    const double beta = 1.0 / temperature;
    // exp(-2*beta*eps) for eps in {2, 4}; eps <= 0 always accepts
    const double acc2 = std::exp(-4.0 * beta);
    const double acc4 = std::exp(-8.0 * beta);
    for (int64_t t = 0; t < n; ++t) {
        const uint64_t raw = rng();
        const int site = int(raw % uint64_t(n));
        const int i = site / L;
        const int j = site % L;
        const int s0 = lat.bit(i, j) ? 1 : -1;
        const int up = i == 0 ? L - 1 : i - 1;
        const int dn = i == L - 1 ? 0 : i + 1;
        const int lf = j == 0 ? L - 1 : j - 1;
        const int rt = j == L - 1 ? 0 : j + 1;
        const int nsum = (lat.bit(up, j) ? 1 : -1) + (lat.bit(dn, j) ? 1 : -1) +
                         (lat.bit(i, lf) ? 1 : -1) + (lat.bit(i, rt) ? 1 : -1);
        const int eps = s0 * nsum;
        bool flip = eps <= 0;
        if (!flip) {
            const double u = double(rng() >> 11) * 0x1.0p-53;
            flip = u < (eps == 2 ? acc2 : acc4);
        }
        if (flip) lat.flip(i, j);
    }
}

}  // namespace ising
