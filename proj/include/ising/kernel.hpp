#pragma once

#include <cstdint>
#include <random>

#include "ising/lattice.hpp"
#include "ising/rng.hpp"
#include "ising/schedule.hpp"
#include "ising/table.hpp"

namespace ising {

enum class KernelBackend { Auto, Scalar, Avx2 };

// Auto resolves to the fastest backend the CPU supports; requesting Avx2 on
// hardware without AVX2+BMI2 throws.
KernelBackend resolve_backend(KernelBackend requested);
const char* backend_name(KernelBackend b);
bool avx2_supported() noexcept;

// Single-site update rule: flip iff dE <= 0 (i.e. eps <= 0) or r < table[eps],
// with r a 12-bit draw. Returns the new spin value.
int update_spin(int s0, int eps, uint16_t r, const BoltzmannTable& table);

// Updates every site of one sublattice exactly once. Per schedule step the
// global LFSR advances one cycle and each site consumes one draw from its own
// lane (lane index = row-major position of the site within the step's block).
void half_sweep(SpinLattice& lat, Color color, LaneRngBank& bank,
                const BoltzmannTable& table, const RowBlockSchedule& schedule,
                KernelBackend backend = KernelBackend::Auto);

// One Monte Carlo step: Black half-sweep then White; N update trials total.
void mcs(SpinLattice& lat, LaneRngBank& bank, const BoltzmannTable& table,
         const RowBlockSchedule& schedule, KernelBackend backend = KernelBackend::Auto);

// Double-precision single-site reference: N Metropolis trials at uniformly
// random sites, acceptance u < exp(-dE/T) with a real-valued uniform draw.
// Statistical oracle for the fixed-point lane kernel.
void sequential_mcs_reference(SpinLattice& lat, std::mt19937_64& rng, double temperature);

namespace detail {

// Bits start..start+63 of a packed row, cyclic modulo the row length.
uint64_t read_bits64_cyclic(const uint64_t* row_words, int side, int start);

void half_sweep_scalar(SpinLattice& lat, Color color, LaneRngBank& bank,
                       const BoltzmannTable& table, const RowBlockSchedule& schedule);
#if defined(__x86_64__) || defined(_M_X64)
void half_sweep_avx2(SpinLattice& lat, Color color, LaneRngBank& bank,
                     const BoltzmannTable& table, const RowBlockSchedule& schedule);
#endif

}  // namespace detail

}  // namespace ising
