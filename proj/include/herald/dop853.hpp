#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace herald {

// Explicit Runge-Kutta 8(5,3) of Dormand and Prince with the step-size
// control of Hairer's DOP853. The state is a complex matrix; real and
// imaginary parts count as separate components in the error norm.
struct Dop853Options {
    double rtol = 1e-10;
    double atol = 1e-12;
    double h_init = 0.0;  // 0: automatic
    double h_max = 0.0;   // 0: unbounded
    long max_steps = 20'000'000;
};

struct Dop853Stats {
    long accepted = 0;
    long rejected = 0;
    long rhs_evals = 0;
};

using Dop853Rhs = std::function<void(double t, const Eigen::MatrixXcd& y, Eigen::MatrixXcd& dy)>;
// Called at every sample time with the state there. Return false to stop.
using Dop853Observer = std::function<bool(double t, Eigen::MatrixXcd& y)>;

// Integrates from t0 through every entry of `samples` (strictly increasing,
// all > t0). Steps are shortened to land exactly on sample times. Throws
// IntegrationError on step-size underflow or when max_steps is exceeded.
Dop853Stats dop853_integrate(const Dop853Rhs& rhs, Eigen::MatrixXcd& y, double t0,
                             const std::vector<double>& samples, const Dop853Observer& observe,
                             const Dop853Options& options = {});

}  // namespace herald
