#pragma once

#include <map>
#include <span>
#include <utility>
#include <vector>

namespace ising {

// Exact critical temperature of the 2-D NN model, 2 / ln(1 + sqrt(2)).
inline constexpr double kCriticalTemperature = 2.2691853142130221;

// Exact spontaneous magnetization: (1 - sinh(2/T)^-4)^(1/8) below Tc, 0 above.
double onsager_magnetization(double temperature);

struct LorentzianFit {
    double chi_max = 0.0;   // peak height A
    double t_star = 0.0;    // peak location
    double width = 0.0;     // half-width w, > 0
    double r2 = 0.0;
    std::pair<double, double> window{0.0, 0.0};  // T-range actually fitted
};

// Least-squares fit of chi(T) ~ A / (1 + ((T - T*)/w)^2) on the
// 2*half_width_points+1 points around the discrete maximum. Damped
// Gauss-Newton with a numeric Jacobian, initialized at the discrete peak.
// Throws FitFailure when the iteration budget is exhausted.
LorentzianFit lorentzian_fit(std::span<const std::pair<double, double>> points,
                             int half_width_points = 3);

struct ScalingFit {
    double exponent = 0.0;  // slope of ln(chi_max) vs ln(L)
    double intercept = 0.0;
    double r2 = 0.0;
};

ScalingFit power_law_fit(std::span<const double> sides, std::span<const double> chi_max);

struct TcFit {
    double tc = 0.0;  // intercept of T* vs 1/L
    double b = 0.0;   // slope
    double r2 = 0.0;
};

TcFit tc_extrapolate(std::span<const double> sides, std::span<const double> t_star);

struct GibbsOracle {
    double e_per_spin = 0.0;
    double m_abs = 0.0;     // <|M|>/N
    double m_signed = 0.0;  // <M>/N, exactly 0 by symmetry
    double chi = 0.0;
    double chi_abs = 0.0;
    std::map<int, double> energy_pmf;  // exact energy distribution
};

// Exact Gibbs averages of the NN model by full enumeration of the 2^(L^2)
// states; limited to L in {2, 4}.
GibbsOracle exhaustive_oracle(int side, double temperature);

}  // namespace ising
