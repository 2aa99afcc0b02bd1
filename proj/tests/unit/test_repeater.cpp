#include <doctest.h>

#include <cmath>
#include <functional>
#include <limits>
#include <random>

#include "herald/error.hpp"
#include "herald/repeater.hpp"

using namespace herald;

namespace {

RepeaterConfig cfg(double links, double p) {
    RepeaterConfig c;
    c.L = links;
    c.L0 = 1.0;
    c.p = p;
    return c;
}

double harmonic(int n) {
    double h = 0.0;
    for (int k = 1; k <= n; ++k) h += 1.0 / k;
    return h;
}

}  // namespace

TEST_CASE("scaling law") {
    CHECK(rate_scaling(cfg(1.0, 0.5)) == doctest::Approx(1.0));
    // p = 3/4: exponent 1 - log2(4) = -1
    CHECK(rate_scaling(cfg(64.0, 0.75)) == doctest::Approx(1.0 / 64.0).epsilon(1e-12));
    CHECK(rate_scaling(cfg(128.0, 1.0)) == doctest::Approx(std::pow(128.0, 1.0 - std::log2(3.0))).epsilon(1e-12));
    CHECK_THROWS_AS(rate_scaling(cfg(0.5, 1.0)), ParameterError);
    CHECK_THROWS_AS(rate_scaling(cfg(4.0, 0.0)), ParameterError);
    CHECK_THROWS_AS(rate_scaling(cfg(4.0, 1.5)), ParameterError);
}

TEST_CASE("deterministic swaps give harmonic numbers") {
    // with p = 1 the tree waits for the last of 2^k exponential links
    for (int k : {0, 1, 3, 5, 7}) {
        const int n = 1 << k;
        CAPTURE(n);
        CHECK(rate_exact_recursive(cfg(n, 1.0)) == doctest::Approx(harmonic(n)).epsilon(1e-5));
    }
}

TEST_CASE("two links wait 3/(2p)") {
    for (double p : {0.2, 0.5, 0.9}) {
        CHECK(rate_exact_recursive(cfg(2.0, p)) == doctest::Approx(1.5 / p).epsilon(1e-5));
        CHECK(rate_exact(cfg(2.0, p)) == doctest::Approx(p / 1.5).epsilon(1e-5));
    }
}

TEST_CASE("recursion agrees with Monte Carlo") {
    std::mt19937_64 rng(20240611);
    std::exponential_distribution<double> expo(1.0);
    const double p = 0.7;
    std::bernoulli_distribution swap(p);
    std::function<double(int)> sample = [&](int level) {
        if (level == 0) return expo(rng);
        double t = 0.0;
        for (;;) {
            t += std::max(sample(level - 1), sample(level - 1));
            if (swap(rng)) return t;
        }
    };
    const int n = 200000;
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = sample(3);
        s += x;
        s2 += x * x;
    }
    const double mean = s / n;
    const double se = std::sqrt((s2 / n - mean * mean) / n);
    CHECK(std::abs(rate_exact_recursive(cfg(8.0, p)) - mean) < 4.0 * se);
}

TEST_CASE("waiting time falls with p and beats the 3/2 rule at p=1") {
    double last = std::numeric_limits<double>::infinity();
    for (double p : {0.3, 0.5, 0.7, 0.9, 1.0}) {
        const double e = rate_exact_recursive(cfg(16.0, p));
        CHECK(e < last);
        last = e;
    }
    CHECK(rate_exact(cfg(128.0, 1.0)) / rate_scaling(cfg(128.0, 1.0)) >= 1.0);
    CHECK_THROWS_AS(rate_exact_recursive(cfg(6.0, 0.9)), ParameterError);
}

TEST_CASE("maximum number of links") {
    CHECK(max_links(0.9, 0.005, 0.005) == doctest::Approx(-std::log(0.9) / 0.01).epsilon(1e-14));
    CHECK(std::isinf(max_links(0.9, 0.0, 0.0)));
    CHECK(max_links(1.0, 0.01, 0.0) == 0.0);
    CHECK_THROWS_AS(max_links(0.0, 0.01, 0.0), ParameterError);
    CHECK_THROWS_AS(max_links(1.2, 0.01, 0.0), ParameterError);
    CHECK_THROWS_AS(max_links(0.9, -0.01, 0.0), ParameterError);
}
