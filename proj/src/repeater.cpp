#include "herald/repeater.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "herald/error.hpp"

namespace herald {

void RepeaterConfig::validate() const {
    if (!(L0 > 0.0)) throw ParameterError("repeater: L0 must be > 0");
    if (!(L >= L0)) throw ParameterError("repeater: L must be >= L0");
    if (!(p > 0.0 && p <= 1.0)) throw ParameterError("repeater: p must lie in (0, 1]");
}

double rate_scaling(const RepeaterConfig& c) {
    c.validate();
    return std::pow(c.links(), 1.0 - std::log2(3.0 / c.p));
}

namespace {

int nesting_levels(double links) {
    const double lv = std::log2(links);
    const double r = std::round(lv);
    if (std::abs(lv - r) > 1e-9 || r < 0.0) {
        throw ParameterError("repeater: L/L0 must be a power of 2 for the recursive model");
    }
    return static_cast<int>(r);
}

// CDF sampled on t_i = i h; linear in between, 1 beyond the grid.
struct GridCdf {
    double h = 1.0;
    std::vector<double> F;

    double operator()(double t) const {
        if (t <= 0.0) return 0.0;
        const double x = t / h;
        const auto i = static_cast<std::size_t>(x);
        if (i + 1 >= F.size()) return 1.0;
        const double w = x - static_cast<double>(i);
        return (1.0 - w) * F[i] + w * F[i + 1];
    }
};

// Mean of max(T, T') for i.i.d. T with CDF F: integral of 1 - F^2.
double mean_of_max(const std::function<double(double)>& F, double span, int n) {
    const double h = span / n;
    double s = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double f = F(i * h);
        const double w = (i == 0 || i == n) ? 0.5 : 1.0;
        s += w * (1.0 - f * f);
    }
    return s * h;
}

// Expected waiting time of the top level with `points` grid cells per level.
// Bin masses sit at right endpoints, which biases every waiting time by
// O(h); the caller extrapolates in h.
double expected_time(int levels, double p, int points) {
    std::function<double(double)> F = [](double t) { return t <= 0.0 ? 0.0 : -std::expm1(-t); };
    double mean_prev = 1.0;
    GridCdf cdf;
    for (int k = 0; k < levels; ++k) {
        const double mean_max = mean_of_max(F, 40.0 * mean_prev + 40.0, 20 * points);
        const double span = 40.0 * mean_max / p;
        GridCdf next;
        next.h = span / points;
        const std::size_t n = static_cast<std::size_t>(points) + 1;
        std::vector<double> m(n, 0.0);
        double prev = 0.0;
        for (std::size_t i = 1; i < n; ++i) {
            const double f = F(static_cast<double>(i) * next.h);
            const double fm = f * f;
            m[i] = fm - prev;
            prev = fm;
        }
        // T' = M_1 + ... + M_G, G geometric with success probability p
        std::vector<double> q(n, 0.0);
        if (p == 1.0) {
            q = m;
        } else {
            for (std::size_t i = 1; i < n; ++i) {
                double conv = 0.0;
                for (std::size_t j = 1; j < i; ++j) conv += m[j] * q[i - j];
                q[i] = p * m[i] + (1.0 - p) * conv;
            }
        }
        next.F.assign(n, 0.0);
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            acc += q[i];
            next.F[i] = std::min(acc, 1.0);
        }
        double mean = 0.0;
        for (std::size_t i = 0; i + 1 < n; ++i) mean += next.h * (1.0 - next.F[i]);
        mean_prev = mean;
        cdf = std::move(next);
        F = [&cdf](double t) { return cdf(t); };
    }
    return mean_prev;
}

}  // namespace

double rate_exact_recursive(const RepeaterConfig& c) {
    c.validate();
    const int levels = nesting_levels(c.links());
    if (levels == 0) return 1.0;
    // Richardson on h, h/2, h/4 cancels the O(h) and O(h^2) grid terms
    constexpr int kPoints = 1000;
    const double e1 = expected_time(levels, c.p, kPoints);
    const double e2 = expected_time(levels, c.p, 2 * kPoints);
    const double e4 = expected_time(levels, c.p, 4 * kPoints);
    return (8.0 * e4 - 6.0 * e2 + e1) / 3.0;
}

double rate_exact(const RepeaterConfig& c) { return 1.0 / rate_exact_recursive(c); }

double max_links(double F_final, double eps0, double epsg) {
    if (!(F_final > 0.0 && F_final <= 1.0)) throw ParameterError("max_links: F_final must lie in (0, 1]");
    if (eps0 < 0.0 || epsg < 0.0) throw ParameterError("max_links: errors must be >= 0");
    const double eps = eps0 + epsg;
    if (eps == 0.0) return std::numeric_limits<double>::infinity();
    return -std::log(F_final) / eps;
}

}  // namespace herald
