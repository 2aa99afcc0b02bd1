#pragma once

#include <map>
#include <string>
#include <vector>

namespace herald {

struct GateReport {
    double t_gate = 0.0;      // [1/gamma]
    double P_success = 0.0;
    double fidelity = 0.0;    // conditional on the herald
    // Angles phi_k of U_k = exp(i phi_k |1><1|) applied to the target state,
    // one per qubit. Undoing them on the qubits gives the ideal gate.
    std::vector<double> phases;
    std::string source;       // "effective" or "full"
    // Comparison values (asymptotic predictions, Stark shift, solver stats).
    std::map<std::string, double> metadata;

    double infidelity() const { return 1.0 - fidelity; }
};

}  // namespace herald
