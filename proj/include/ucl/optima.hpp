#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "ucl/channel.hpp"

namespace ucl {

// Closed-form optimum for one (case, d, M) scenario. The discriminant,
// eigenvalue, xi and gamma only exist in the probabilistic-asymmetric case;
// everywhere else they stay empty rather than carrying sentinel zeros.
struct OptimaReport {
    Case scenario = Case::DetSym;
    int d = 0;
    int M = 0;
    std::optional<double> discriminant;
    std::optional<double> lambda_max;
    std::optional<double> xi;
    std::optional<double> gamma;
    double f_bar = 0.0;
    double f_k = 0.0;
    double f_other = 0.0;
};

// sqrt((M+d-1)^2 - 4(M-1)(d-1)), evaluated with the radicand rearranged as
// (M-d+1)^2 + 4(d-1) so large M+d does not cancel.
double discriminant(int d, int M);

// Top eigenvalue (M+d-1+D)/(2d) of P+ + ((M-1)/d)(|0><0| (x) I).
double lambda_max(int d, int M);

// xi = 1/[1 + (d-1)/(d*lambda-d+1)^2], gamma = sqrt((1-xi)/(xi(d-1))).
std::pair<double, double> xi_gamma(int d, int M);

OptimaReport optimal_fidelities(Case c, int d, int M);

// Mean entanglement fidelity at the optimum; the bridge image of f_bar.
double closed_form_mean_entanglement_fidelity(Case c, int d, int M);

// All four cases for every (d, M) pair, ordered by d, then M, then case.
std::vector<OptimaReport> table(const std::vector<int>& d_list,
                                const std::vector<int>& M_list);

}  // namespace ucl
