#include "ucl/optima.hpp"

#include <cmath>
#include <stdexcept>

namespace ucl {

namespace {

void check_dm(int d, int M) {
    if (d < 2) throw std::invalid_argument("local dimension must be >= 2");
    if (M < 1) throw std::invalid_argument("output count must be >= 1");
}

}  // namespace

double discriminant(int d, int M) {
    check_dm(d, M);
    const double a = static_cast<double>(M - d + 1);
    return std::sqrt(a * a + 4.0 * (d - 1));
}

double lambda_max(int d, int M) {
    check_dm(d, M);
    return (M + d - 1 + discriminant(d, M)) / (2.0 * d);
}

std::pair<double, double> xi_gamma(int d, int M) {
    check_dm(d, M);
    const double t = d * lambda_max(d, M) - d + 1;
    const double xi = 1.0 / (1.0 + (d - 1) / (t * t));
    const double gamma = std::sqrt((1.0 - xi) / (xi * (d - 1)));
    return {xi, gamma};
}

OptimaReport optimal_fidelities(Case c, int d, int M) {
    check_dm(d, M);
    OptimaReport r;
    r.scenario = c;
    r.d = d;
    r.M = M;
    switch (c) {
        case Case::DetSym:
            r.f_k = r.f_other = r.f_bar = 1.0 / d;
            break;
        case Case::DetAsym:
            r.f_k = 1.0;
            r.f_other = 1.0 / d;
            r.f_bar = 1.0 / M + static_cast<double>(M - 1) / (static_cast<double>(d) * M);
            break;
        case Case::ProbSym:
            r.f_k = r.f_other = r.f_bar = 2.0 / (d + 1);
            break;
        case Case::ProbAsym: {
            const double D = discriminant(d, M);
            const double lm = lambda_max(d, M);
            const auto [xi, gamma] = xi_gamma(d, M);
            r.discriminant = D;
            r.lambda_max = lm;
            r.xi = xi;
            r.gamma = gamma;
            r.f_k = ((2.0 - d) * xi + d + 2.0 * std::sqrt(xi * (1.0 - xi) * (d - 1))) / (d + 1);
            r.f_other = (xi + 1.0) / (d + 1);
            r.f_bar = (3.0 * M + d - 1 + D) / (2.0 * M * (d + 1));
            break;
        }
    }
    return r;
}

double closed_form_mean_entanglement_fidelity(Case c, int d, int M) {
    check_dm(d, M);
    switch (c) {
        case Case::DetSym:
            return 1.0 / (static_cast<double>(d) * d);
        case Case::DetAsym:
            return (1.0 + static_cast<double>(M - 1) / (static_cast<double>(d) * d)) / M;
        case Case::ProbSym:
            return 1.0 / d;
        case Case::ProbAsym:
            return lambda_max(d, M) / M;
    }
    throw std::logic_error("unreachable");
}

std::vector<OptimaReport> table(const std::vector<int>& d_list,
                                const std::vector<int>& M_list) {
    if (d_list.empty() || M_list.empty())
        throw std::invalid_argument("d and M lists must be nonempty");
    static constexpr Case kCases[] = {Case::DetSym, Case::DetAsym, Case::ProbSym,
                                      Case::ProbAsym};
    std::vector<OptimaReport> out;
    out.reserve(d_list.size() * M_list.size() * 4);
    for (int d : d_list)
        for (int M : M_list)
            for (Case c : kCases) out.push_back(optimal_fidelities(c, d, M));
    return out;
}

}  // namespace ucl
