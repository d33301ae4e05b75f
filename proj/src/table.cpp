#include "ising/table.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ising {

uint16_t fixed_point_threshold(double delta_e, double temperature) {
    if (temperature <= 0.0) throw std::invalid_argument("temperature must be > 0");
    if (delta_e <= 0.0) return uint16_t(kFixedPointScale - 1);
    const double x = double(kFixedPointScale) * std::exp(-delta_e / temperature);
    const double r = std::round(x);
    return uint16_t(std::min(r, double(kFixedPointScale - 1)));
}

BoltzmannTable BoltzmannTable::build(double temperature) {
    if (temperature <= 0.0) throw std::invalid_argument("temperature must be > 0");
    BoltzmannTable t;
    t.temperature_ = temperature;
    for (int k = 0; k < 5; ++k) {
        const int eps = 2 * k - 4;
        t.entries_[size_t(k)] = fixed_point_threshold(2.0 * eps, temperature);
    }
    return t;
}

uint16_t BoltzmannTable::entry(int eps) const {
    if (eps < -4 || eps > 4 || eps % 2 != 0)
        throw std::invalid_argument("eps must be one of {-4,-2,0,2,4}, got " +
                                    std::to_string(eps));
    return entries_[size_t((eps + 4) / 2)];
}

int J1J2Table::grid_index(int eps_nn, int eps_nnn) {
    if (eps_nn < -4 || eps_nn > 4 || eps_nn % 2 != 0 || eps_nnn < -4 || eps_nnn > 4 ||
        eps_nnn % 2 != 0)
        throw std::invalid_argument("J1J2 eps components must be in {-4,-2,0,2,4}");
    return 5 * ((eps_nn + 4) / 2) + (eps_nnn + 4) / 2;
}

J1J2Table J1J2Table::build(double temperature, double j1, double j2) {
    if (temperature <= 0.0) throw std::invalid_argument("temperature must be > 0");
    if (!(j1 > 0.0)) throw std::invalid_argument("J1 must be > 0");
    if (!(j2 <= 0.0)) throw std::invalid_argument("J2 must be <= 0");
    J1J2Table t;
    t.temperature_ = temperature;
    t.j1_ = j1;
    t.j2_ = j2;
    for (int a = -4; a <= 4; a += 2) {
        for (int b = -4; b <= 4; b += 2) {
            const double eps = j1 * a + j2 * b;
            const int idx = grid_index(a, b);
            t.free_[size_t(idx)] = eps <= 0.0;
            t.thresholds_[size_t(idx)] = fixed_point_threshold(2.0 * eps, temperature);
        }
    }
    return t;
}

uint16_t J1J2Table::threshold(int eps_nn, int eps_nnn) const {
    return thresholds_[size_t(grid_index(eps_nn, eps_nnn))];
}

bool J1J2Table::flip_is_free(int eps_nn, int eps_nnn) const {
    return free_[size_t(grid_index(eps_nn, eps_nnn))];
}

double J1J2Table::eps_prime(int eps_nn, int eps_nnn) const {
    grid_index(eps_nn, eps_nnn);  // domain check
    return j1_ * eps_nn + j2_ * eps_nnn;
}

std::vector<double> J1J2Table::positive_eps_values() const {
    std::vector<double> vals;
    for (int a = -4; a <= 4; a += 2)
        for (int b = -4; b <= 4; b += 2) {
            const double eps = j1_ * a + j2_ * b;
            if (eps > 0.0) vals.push_back(eps);
        }
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end(),
                           [](double x, double y) { return std::fabs(x - y) < 1e-12; }),
               vals.end());
    return vals;
}

PottsTable PottsTable::build(double temperature, double coupling) {
    if (temperature <= 0.0) throw std::invalid_argument("temperature must be > 0");
    if (!(coupling > 0.0)) throw std::invalid_argument("Potts coupling must be > 0");
    PottsTable t;
    t.temperature_ = temperature;
    for (int k = 1; k <= 4; ++k)
        t.thresholds_[size_t(k - 1)] = fixed_point_threshold(coupling * k, temperature);
    return t;
}

uint16_t PottsTable::threshold(int k) const {
    if (k < 1 || k > 4) throw std::invalid_argument("Potts dE index must be in [1,4]");
    return thresholds_[size_t(k - 1)];
}

}  // namespace ising
