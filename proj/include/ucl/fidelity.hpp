#pragma once

#include <cstdint>
#include <vector>

#include "ucl/channel.hpp"

namespace ucl {

// Monte Carlo estimates of the per-output average fidelities of one channel.
struct FidelityReport {
    std::vector<double> per_output;
    double mean = 0.0;
    double mean_success_probability = 0.0;
    std::vector<double> mc_standard_errors;
};

// Tr[P+ a] / Tr[a]. Throws std::domain_error when the trace vanishes.
double entanglement_fidelity(const Matrix& a_rsi);

// Bridge formula F = (d F^e + 1)/(d + 1).
double average_from_entanglement(double fe, int d);

// Self-normalized estimator of the probability-weighted average fidelity of
// output i (1-based): sum p_psi <psi|rho_i(psi)|psi> / sum p_psi over Haar
// samples, with a first-order delta-method standard error. Samples split
// into `task_count` independently seeded chunks combined in index order;
// task_count <= 0 reads UCL_THREADS (default 1).
std::pair<double, double> mc_average_fidelity(const Channel& ch, int i, int n_samples,
                                              std::uint64_t seed, int task_count = 0);

// Per-output estimates for i = 1..M from one shared sample stream.
FidelityReport full_report(const Channel& ch, int n_samples, std::uint64_t seed,
                           int task_count = 0);

}  // namespace ucl
