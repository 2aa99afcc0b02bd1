#pragma once

namespace herald {

struct RepeaterConfig {
    double L = 1.0;   // total distance [km]
    double L0 = 1.0;  // elementary link [km]
    double p = 1.0;   // swap success probability
    double eps0 = 0.0;
    double epsg = 0.0;
    double F_final = 0.9;

    double links() const { return L / L0; }
    void validate() const;  // L >= L0 > 0, 0 < p <= 1
};

// (L/L0)^(1 - log2(3/p)): rate relative to one elementary link.
double rate_scaling(const RepeaterConfig& config);

// Expected time per distributed pair, in units of the mean elementary
// generation time, for a nesting tree where every level waits for both
// halves and retries both from scratch when the swap fails.
// Elementary generation is exponential; waiting times are propagated as full
// distributions, so the maximum of two halves is exact rather than a fixed
// factor. Links must be a power of 2.
double rate_exact_recursive(const RepeaterConfig& config);

// 1 / rate_exact_recursive, comparable with rate_scaling.
double rate_exact(const RepeaterConfig& config);

// -ln(F_final) / (eps0 + epsg); +infinity when both errors vanish.
double max_links(double F_final, double eps0, double epsg);

}  // namespace herald
