#include "ising/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "ising/common.hpp"

namespace ising {

double onsager_magnetization(double temperature) {
    if (temperature <= 0.0) throw std::invalid_argument("temperature must be > 0");
    if (temperature >= kCriticalTemperature) return 0.0;
    const double s = std::sinh(2.0 / temperature);
    return std::pow(1.0 - 1.0 / (s * s * s * s), 0.125);
}

namespace {

struct LinearFit {
    double slope, intercept, r2;
};

LinearFit least_squares(std::span<const double> x, std::span<const double> y) {
    const size_t n = x.size();
    const double nd = double(n);
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= nd;
    my /= nd;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("degenerate fit design: no x variation");
    const double slope = sxy / sxx;
    const double r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
    return {slope, my - slope * mx, r2};
}

double lorentzian(double t, const std::array<double, 3>& p) {
    const double u = (t - p[1]) / p[2];
    return p[0] / (1.0 + u * u);
}

double ssr(std::span<const std::pair<double, double>> pts, const std::array<double, 3>& p) {
    double s = 0.0;
    for (const auto& [t, y] : pts) {
        const double r = lorentzian(t, p) - y;
        s += r * r;
    }
    return s;
}

// Solve the 3x3 system a*x = b in place, partial pivoting.
std::array<double, 3> solve3(std::array<std::array<double, 3>, 3> a, std::array<double, 3> b) {
    for (int c = 0; c < 3; ++c) {
        int piv = c;
        for (int r = c + 1; r < 3; ++r)
            if (std::fabs(a[r][c]) > std::fabs(a[piv][c])) piv = r;
        std::swap(a[c], a[piv]);
        std::swap(b[c], b[piv]);
        if (a[c][c] == 0.0) throw std::runtime_error("singular normal equations");
        for (int r = 0; r < 3; ++r) {
            if (r == c) continue;
            const double f = a[r][c] / a[c][c];
            for (int k = c; k < 3; ++k) a[r][k] -= f * a[c][k];
            b[r] -= f * b[c];
        }
    }
    return {b[0] / a[0][0], b[1] / a[1][1], b[2] / a[2][2]};
}

}  // namespace

LorentzianFit lorentzian_fit(std::span<const std::pair<double, double>> points,
                             int half_width_points) {
    if (half_width_points < 1) throw std::invalid_argument("window half-width must be >= 1");
    std::vector<std::pair<double, double>> pts(points.begin(), points.end());
    std::sort(pts.begin(), pts.end());
    size_t peak = 0;
    for (size_t i = 1; i < pts.size(); ++i)
        if (pts[i].second > pts[peak].second) peak = i;
    const size_t lo = peak > size_t(half_width_points) ? peak - size_t(half_width_points) : 0;
    const size_t hi = std::min(pts.size(), peak + size_t(half_width_points) + 1);
    std::vector<std::pair<double, double>> win(pts.begin() + long(lo), pts.begin() + long(hi));
    if (win.size() < 5)
        throw std::invalid_argument("lorentzian fit needs >= 5 points in the window, got " +
                                    std::to_string(win.size()));
    for (const auto& [t, y] : win)
        if (y <= 0.0) throw std::invalid_argument("lorentzian fit needs chi > 0");

    std::array<double, 3> p = {pts[peak].second, pts[peak].first,
                               std::max(1e-3, (win.back().first - win.front().first) / 4.0)};
    double cur = ssr(win, p);

    constexpr int kMaxIter = 50;
    constexpr double kRelTol = 1e-10;
    bool converged = false;
    for (int iter = 0; iter < kMaxIter; ++iter) {
        // numeric Jacobian, forward differences
        std::array<std::array<double, 3>, 3> jtj{};
        std::array<double, 3> jtr{};
        for (const auto& [t, y] : win) {
            const double f0 = lorentzian(t, p);
            std::array<double, 3> grad;
            for (int k = 0; k < 3; ++k) {
                auto ph = p;
                const double h = std::max(1e-8, std::fabs(p[size_t(k)]) * 1e-7);
                ph[size_t(k)] += h;
                grad[size_t(k)] = (lorentzian(t, ph) - f0) / h;
            }
            const double r = f0 - y;
            for (int a = 0; a < 3; ++a) {
                jtr[size_t(a)] += grad[size_t(a)] * r;
                for (int b = 0; b < 3; ++b)
                    jtj[size_t(a)][size_t(b)] += grad[size_t(a)] * grad[size_t(b)];
            }
        }
        std::array<double, 3> delta;
        try {
            delta = solve3(jtj, {-jtr[0], -jtr[1], -jtr[2]});
        } catch (const std::runtime_error&) {
            throw FitFailure("lorentzian fit: singular normal equations", std::sqrt(cur));
        }

        // halve the step until the residual drops
        double lambda = 1.0;
        double next = cur;
        std::array<double, 3> cand = p;
        bool improved = false;
        for (int halves = 0; halves < 40; ++halves) {
            cand = {p[0] + lambda * delta[0], p[1] + lambda * delta[1],
                    p[2] + lambda * delta[2]};
            next = ssr(win, cand);
            if (next < cur) {
                improved = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!improved) {
            converged = true;  // no descent direction left: at a minimum
            break;
        }
        const double rel = (cur - next) / std::max(cur, 1e-300);
        p = cand;
        cur = next;
        if (rel < kRelTol) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw FitFailure("lorentzian fit did not converge in 50 iterations", std::sqrt(cur));

    double sst = 0.0, my = 0.0;
    for (const auto& [t, y] : win) my += y;
    my /= double(win.size());
    for (const auto& [t, y] : win) sst += (y - my) * (y - my);

    LorentzianFit out;
    out.chi_max = p[0];
    out.t_star = p[1];
    out.width = std::fabs(p[2]);  // w enters squared; sign is a gauge choice
    out.r2 = sst == 0.0 ? 1.0 : std::max(0.0, 1.0 - cur / sst);
    out.window = {win.front().first, win.back().first};
    return out;
}

ScalingFit power_law_fit(std::span<const double> sides, std::span<const double> chi_max) {
    if (sides.size() != chi_max.size())
        throw std::invalid_argument("power law fit: size mismatch");
    if (sides.size() < 3) throw std::invalid_argument("power law fit needs >= 3 sizes");
    std::vector<double> lx(sides.size()), ly(sides.size());
    for (size_t i = 0; i < sides.size(); ++i) {
        if (sides[i] <= 0.0 || chi_max[i] <= 0.0)
            throw std::invalid_argument("power law fit needs positive inputs");
        lx[i] = std::log(sides[i]);
        ly[i] = std::log(chi_max[i]);
    }
    const auto fit = least_squares(lx, ly);
    return {fit.slope, fit.intercept, fit.r2};
}

TcFit tc_extrapolate(std::span<const double> sides, std::span<const double> t_star) {
    if (sides.size() != t_star.size())
        throw std::invalid_argument("Tc extrapolation: size mismatch");
    if (sides.size() < 3) throw std::invalid_argument("Tc extrapolation needs >= 3 sizes");
    std::vector<double> inv(sides.size());
    for (size_t i = 0; i < sides.size(); ++i) {
        if (sides[i] <= 0.0) throw std::invalid_argument("sides must be positive");
        inv[i] = 1.0 / sides[i];
    }
    const auto fit = least_squares(inv, std::vector<double>(t_star.begin(), t_star.end()));
    return {fit.intercept, fit.slope, fit.r2};
}

GibbsOracle exhaustive_oracle(int side, double temperature) {
    if (side != 2 && side != 4)
        throw std::invalid_argument("exhaustive oracle supports L in {2,4} only (2^(L^2) states)");
    if (temperature <= 0.0) throw std::invalid_argument("temperature must be > 0");

    const int n = side * side;
    const uint64_t n_states = uint64_t(1) << n;

    // first pass: energies and the ground state for weight shifting
    std::vector<int> energy(n_states);
    std::vector<int> magnet(n_states);
    int e_min = 0;
    for (uint64_t cfg = 0; cfg < n_states; ++cfg) {
        int e = 0, m = 0;
        for (int i = 0; i < side; ++i) {
            const int dn = i == side - 1 ? 0 : i + 1;
            for (int j = 0; j < side; ++j) {
                const int rt = j == side - 1 ? 0 : j + 1;
                const int s = (cfg >> (i * side + j)) & 1 ? 1 : -1;
                const int sr = (cfg >> (i * side + rt)) & 1 ? 1 : -1;
                const int sd = (cfg >> (dn * side + j)) & 1 ? 1 : -1;
                e -= s * (sr + sd);
                m += s;
            }
        }
        energy[cfg] = e;
        magnet[cfg] = m;
        e_min = std::min(e_min, e);
    }

    double z = 0.0, se = 0.0, sm = 0.0, sabs = 0.0, sm2 = 0.0;
    std::map<int, double> pmf;
    for (uint64_t cfg = 0; cfg < n_states; ++cfg) {
        const double w = std::exp(-(energy[cfg] - e_min) / temperature);
        z += w;
        se += w * energy[cfg];
        sm += w * magnet[cfg];
        sabs += w * std::abs(magnet[cfg]);
        sm2 += w * double(magnet[cfg]) * double(magnet[cfg]);
        pmf[energy[cfg]] += w;
    }
    for (auto& [e, p] : pmf) p /= z;

    GibbsOracle out;
    out.e_per_spin = se / z / n;
    out.m_signed = sm / z / n;
    out.m_abs = sabs / z / n;
    const double mean_m = sm / z;
    const double mean_abs = sabs / z;
    const double mean_m2 = sm2 / z;
    out.chi = (mean_m2 - mean_m * mean_m) / (temperature * n);
    out.chi_abs = (mean_m2 - mean_abs * mean_abs) / (temperature * n);
    out.energy_pmf = std::move(pmf);
    return out;
}

}  // namespace ising
