#pragma once

#include <cstdint>
#include <vector>

#include "ucl/channel.hpp"

namespace ucl {

struct SearchConfig {
    int d = 2;
    int M = 2;
    Case scenario = Case::ProbAsym;
    int restarts = 20;
    int max_iterations = 60000;          // simplex iterations per restart
    double convergence_tolerance = 1e-9; // objective spread at which a restart stops
    double penalty_weight = 1e3;         // deterministic constraint penalty
    std::uint64_t seed = 0;
    int task_count = 0;                  // <= 0 reads UCL_THREADS
};

struct SearchResult {
    // Mean entanglement fidelity found; symmetric cases report the minimum
    // over outputs instead, the value a genuinely symmetric channel attains.
    double best_objective = 0.0;
    double best_f_bar = 0.0;            // bridge image, averaged over outputs
    double gap_to_closed_form = 0.0;    // |closed-form F_bar^e - best_objective|
    double constraint_violation = 0.0;  // ||A_R - I/d||_F, deterministic cases only
    long iterations_used = 0;
    ChoiState best_state;               // unit-trace product state realizing the optimum
};

// Real parameter count of the product ansatz: a d^2 x d^2 complex factor for
// the favored pair plus a d x d factor per remaining output.
int parameter_count(int d, int M);

// Decode an unconstrained real vector into X (x) Y_2 (x) ... (x) Y_M with
// every factor PSD and unit trace (each factor is L L^dag / Tr). The favored
// slot is k = 1, so no reordering is needed.
ChoiState parametrize_product_choi(const Eigen::VectorXd& params, int d, int M);

// Mean entanglement fidelity (1/M) sum_i Tr[P+_{R S_i} reduced_choi(a, i)] of
// a unit-trace Choi state.
double objective(const ChoiState& a, int k);

// Per-output entanglement fidelities of a unit-trace product Choi state.
Eigen::VectorXd per_output_entanglement_fidelities(const ChoiState& a, int k);

// Local filtering that moves a product Choi state onto the deterministic
// manifold A_R = I/d exactly, preserving positivity, unit trace and product
// structure. Used to evaluate penalized solutions at exact feasibility.
ChoiState project_deterministic(const ChoiState& product_choi, int k);

// Multi-start Nelder-Mead ascent over the product ansatz under the given
// regime. Symmetric cases maximize the minimum per-output fidelity;
// deterministic cases subtract penalty_weight * ||A_R - I/d||_F^2.
SearchResult optimize(const SearchConfig& config);

}  // namespace ucl
