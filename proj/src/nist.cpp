#include "ising/nist.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace ising {

namespace detail {

double regularized_gamma_q(double a, double x) {
    if (a <= 0.0 || x < 0.0) throw std::invalid_argument("gamma_q domain");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) {
        // lower series, Q = 1 - P
        double ap = a;
        double sum = 1.0 / a;
        double del = sum;
        for (int n = 0; n < 1000; ++n) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
        }
        return 1.0 - sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    // upper continued fraction, modified Lentz
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 1000; ++i) {
        const double an = -double(i) * (double(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-16) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

int gf2_rank32(std::array<uint32_t, 32> rows) {
    int rank = 0;
    for (int bit = 31; bit >= 0; --bit) {
        int pivot = -1;
        for (int i = rank; i < 32; ++i) {
            if ((rows[size_t(i)] >> bit) & 1u) {
                pivot = i;
                break;
            }
        }
        if (pivot < 0) continue;
        std::swap(rows[size_t(rank)], rows[size_t(pivot)]);
        for (int i = 0; i < 32; ++i)
            if (i != rank && ((rows[size_t(i)] >> bit) & 1u)) rows[size_t(i)] ^= rows[size_t(rank)];
        ++rank;
    }
    return rank;
}

}  // namespace detail

namespace {

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

void require_bits(const Bitstream& bits, size_t min_n, const char* test) {
    if (bits.size() < min_n)
        throw std::invalid_argument(std::string(test) + ": need at least " +
                                    std::to_string(min_n) + " bits, got " +
                                    std::to_string(bits.size()));
}

}  // namespace

double monobit_test(const Bitstream& bits) {
    require_bits(bits, 100, "monobit");
    const double n = double(bits.size());
    int64_t s = 0;
    for (const uint8_t b : bits) s += b ? 1 : -1;
    return std::erfc(std::fabs(double(s)) / std::sqrt(2.0 * n));
}

double block_frequency_test(const Bitstream& bits, int block_len) {
    require_bits(bits, 100, "block frequency");
    if (block_len < 2) throw std::invalid_argument("block frequency: block_len must be >= 2");
    const size_t n_blocks = bits.size() / size_t(block_len);
    if (n_blocks < 1)
        throw std::invalid_argument("block frequency: stream shorter than one block");
    double chi2 = 0.0;
    for (size_t b = 0; b < n_blocks; ++b) {
        int64_t ones = 0;
        for (int k = 0; k < block_len; ++k) ones += bits[b * size_t(block_len) + size_t(k)];
        const double pi = double(ones) / double(block_len);
        chi2 += (pi - 0.5) * (pi - 0.5);
    }
    chi2 *= 4.0 * double(block_len);
    return detail::regularized_gamma_q(double(n_blocks) / 2.0, chi2 / 2.0);
}

double runs_test(const Bitstream& bits) {
    require_bits(bits, 100, "runs");
    const double n = double(bits.size());
    int64_t ones = 0;
    for (const uint8_t b : bits) ones += b;
    const double pi = double(ones) / n;
    if (std::fabs(pi - 0.5) >= 2.0 / std::sqrt(n)) return 0.0;  // frequency pre-test
    int64_t v = 1;
    for (size_t k = 1; k < bits.size(); ++k) v += bits[k] != bits[k - 1];
    const double num = std::fabs(double(v) - 2.0 * n * pi * (1.0 - pi));
    const double den = 2.0 * std::sqrt(2.0 * n) * pi * (1.0 - pi);
    return std::erfc(num / den);
}

double cusum_test(const Bitstream& bits) {
    require_bits(bits, 100, "cusum");
    const double n = double(bits.size());
    int64_t s = 0;
    int64_t z = 0;
    for (const uint8_t b : bits) {
        s += b ? 1 : -1;
        z = std::max<int64_t>(z, s < 0 ? -s : s);
    }
    const double zd = double(z);
    const double sqn = std::sqrt(n);
    double sum1 = 0.0;
    for (long k = long(std::floor((-n / zd + 1.0) / 4.0));
         k <= long(std::floor((n / zd - 1.0) / 4.0)); ++k) {
        sum1 += std_normal_cdf((4.0 * double(k) + 1.0) * zd / sqn) -
                std_normal_cdf((4.0 * double(k) - 1.0) * zd / sqn);
    }
    double sum2 = 0.0;
    for (long k = long(std::floor((-n / zd - 3.0) / 4.0));
         k <= long(std::floor((n / zd - 1.0) / 4.0)); ++k) {
        sum2 += std_normal_cdf((4.0 * double(k) + 3.0) * zd / sqn) -
                std_normal_cdf((4.0 * double(k) + 1.0) * zd / sqn);
    }
    const double p = 1.0 - sum1 + sum2;
    return std::min(1.0, std::max(0.0, p));
}

std::array<double, 3> rank32_probabilities() {
    auto prob = [](int r) {
        const double M = 32.0, Q = 32.0;
        double p = std::pow(2.0, double(r) * (Q + M - double(r)) - M * Q);
        for (int i = 0; i < r; ++i) {
            p *= (1.0 - std::pow(2.0, double(i) - Q)) * (1.0 - std::pow(2.0, double(i) - M)) /
                 (1.0 - std::pow(2.0, double(i) - double(r)));
        }
        return p;
    };
    const double p32 = prob(32);
    const double p31 = prob(31);
    return {p32, p31, 1.0 - p32 - p31};
}

double rank_test(const Bitstream& bits) {
    constexpr size_t kMatrixBits = 32 * 32;
    const size_t n_matrices = bits.size() / kMatrixBits;
    if (n_matrices < 38)
        throw std::invalid_argument("rank: need >= 38 matrices (38912 bits), got " +
                                    std::to_string(bits.size()) + " bits");
    const auto probs = rank32_probabilities();
    size_t f32 = 0, f31 = 0, flow = 0;
    for (size_t m = 0; m < n_matrices; ++m) {
        std::array<uint32_t, 32> rows{};
        const size_t base = m * kMatrixBits;
        for (int i = 0; i < 32; ++i) {
            uint32_t w = 0;
            for (int j = 0; j < 32; ++j)
                w = (w << 1) | bits[base + size_t(i) * 32 + size_t(j)];
            rows[size_t(i)] = w;
        }
        const int r = detail::gf2_rank32(rows);
        if (r == 32) ++f32;
        else if (r == 31) ++f31;
        else ++flow;
    }
    const double N = double(n_matrices);
    auto term = [&](double f, double p) {
        const double e = N * p;
        return (f - e) * (f - e) / e;
    };
    const double chi2 = term(double(f32), probs[0]) + term(double(f31), probs[1]) +
                        term(double(flow), probs[2]);
    return std::exp(-chi2 / 2.0);  // chi-square with 2 dof
}

std::vector<TestResult> run_battery(const Bitstream& bits, int block_len) {
    std::vector<TestResult> out;
    auto add = [&](const char* name, double p) {
        out.push_back({name, p, p >= kNistAlpha});
    };
    add("monobit", monobit_test(bits));
    add("block-frequency", block_frequency_test(bits, block_len));
    add("runs", runs_test(bits));
    add("cumulative-sums", cusum_test(bits));
    add("rank", rank_test(bits));
    return out;
}

}  // namespace ising
