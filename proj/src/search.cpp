#include "ucl/search.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <future>
#include <numeric>
#include <stdexcept>

#include "ucl/errors.hpp"
#include "ucl/fidelity.hpp"
#include "ucl/optima.hpp"

namespace ucl {

namespace {

int thread_count_from_env() {
    const char* env = std::getenv("UCL_THREADS");
    if (!env) return 1;
    int v = std::atoi(env);
    return v >= 1 ? v : 1;
}

// Unit-trace PSD factors of the product ansatz, favored slot first.
struct FactoredChoi {
    Matrix x;               // d^2 x d^2 on (R, S_1)
    std::vector<Matrix> ys; // d x d on S_2 .. S_M
};

Matrix psd_from_factor(const Eigen::VectorXd& params, Eigen::Index offset, int dim) {
    Matrix l(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
            Eigen::Index base = offset + 2 * (static_cast<Eigen::Index>(i) * dim + j);
            l(i, j) = Complex(params[base], params[base + 1]);
        }
    Matrix psd = l * l.adjoint();
    double tr = psd.trace().real();
    if (tr < 1e-290) return Matrix::Identity(dim, dim) / dim;  // degenerate factor
    return psd / tr;
}

FactoredChoi decode(const Eigen::VectorXd& params, int d, int M) {
    if (params.size() != parameter_count(d, M))
        throw std::invalid_argument("parameter vector length mismatch");
    FactoredChoi f;
    const int dd = d * d;
    f.x = psd_from_factor(params, 0, dd);
    Eigen::Index offset = 2 * static_cast<Eigen::Index>(dd) * dd;
    f.ys.reserve(M - 1);
    for (int l = 0; l < M - 1; ++l) {
        f.ys.push_back(psd_from_factor(params, offset, d));
        offset += 2 * static_cast<Eigen::Index>(d) * d;
    }
    return f;
}

// The optimizer's internal encoding uses Hermitian roots, X = H^2 / Tr(H^2).
// That spans the same unit-trace PSD factors as the L L^dag form but without
// its continuous L -> LU gauge orbit, which starves the simplex in high
// dimension. One Hermitian dim x dim factor packs into dim^2 reals.
Matrix psd_from_hermitian_root(const Eigen::VectorXd& params, Eigen::Index offset,
                               int dim) {
    Matrix h(dim, dim);
    Eigen::Index at = offset;
    for (int i = 0; i < dim; ++i) h(i, i) = params[at++];
    for (int i = 0; i < dim; ++i)
        for (int j = i + 1; j < dim; ++j) {
            h(i, j) = Complex(params[at], params[at + 1]);
            h(j, i) = std::conj(h(i, j));
            at += 2;
        }
    Matrix psd = h * h;
    double tr = psd.trace().real();
    if (tr < 1e-290) return Matrix::Identity(dim, dim) / dim;
    return psd / tr;
}

int hermitian_parameter_count(int d, int M) {
    const int dd = d * d;
    return dd * dd + (M - 1) * dd;
}

FactoredChoi decode_hermitian(const Eigen::VectorXd& params, int d, int M) {
    FactoredChoi f;
    const int dd = d * d;
    f.x = psd_from_hermitian_root(params, 0, dd);
    Eigen::Index offset = static_cast<Eigen::Index>(dd) * dd;
    f.ys.reserve(M - 1);
    for (int l = 0; l < M - 1; ++l) {
        f.ys.push_back(psd_from_hermitian_root(params, offset, d));
        offset += dd;
    }
    return f;
}

ChoiState assemble(const FactoredChoi& f, int d, int M) {
    std::vector<Matrix> factors;
    factors.reserve(M);
    factors.push_back(f.x);
    for (const Matrix& y : f.ys) factors.push_back(y);
    ChoiState a;
    a.d = d;
    a.M = M;
    a.matrix = kron_all(factors);
    return a;
}

Matrix trace_out_second(const Matrix& x, int d) {
    Matrix out = Matrix::Zero(d, d);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
            Complex acc = 0.0;
            for (int s = 0; s < d; ++s) acc += x(a * d + s, b * d + s);
            out(a, b) = acc;
        }
    return out;
}

// Per-output entanglement fidelities straight from the factors:
// F^e_1 = <Phi+|X|Phi+>, F^e_i = Tr[Y_i^T X_R]/d for the attached slots.
Eigen::VectorXd factored_fidelities(const FactoredChoi& f, int d, int M) {
    Eigen::VectorXd fe(M);
    Complex overlap = 0.0;
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) overlap += f.x(a * d + a, b * d + b);
    fe[0] = overlap.real() / d;

    const Matrix x_r = trace_out_second(f.x, d);
    for (int i = 1; i < M; ++i)
        fe[i] = f.ys[i - 1].cwiseProduct(x_r).sum().real() / d;
    return fe;
}

double det_violation(const FactoredChoi& f, int d) {
    const Matrix x_r = trace_out_second(f.x, d);
    return (x_r - Matrix::Identity(d, d) / d).norm();
}

struct SimplexOutcome {
    Eigen::VectorXd x;
    double f = 0.0;
    long iterations = 0;
    bool converged = false;
};

// Nelder-Mead with the Gao-Han adaptive coefficients, minimizing `fn`.
SimplexOutcome nelder_mead(const std::function<double(const Eigen::VectorXd&)>& fn,
                           const Eigen::VectorXd& x0, double step, long max_iter,
                           double ftol) {
    const Eigen::Index n = x0.size();
    const double alpha = 1.0;
    const double beta = 1.0 + 2.0 / static_cast<double>(n);
    const double gamma = 0.75 - 1.0 / (2.0 * static_cast<double>(n));
    const double delta = 1.0 - 1.0 / static_cast<double>(n);

    std::vector<Eigen::VectorXd> pts(n + 1, x0);
    std::vector<double> vals(n + 1);
    for (Eigen::Index i = 0; i < n; ++i) pts[i + 1][i] += step;
    for (Eigen::Index i = 0; i <= n; ++i) vals[i] = fn(pts[i]);

    std::vector<Eigen::Index> idx(n + 1);
    std::iota(idx.begin(), idx.end(), 0);
    auto order = [&] {
        std::stable_sort(idx.begin(), idx.end(),
                         [&](Eigen::Index a, Eigen::Index b) { return vals[a] < vals[b]; });
    };
    order();

    // Running sum over every vertex; the reflection centroid (all but the
    // worst) falls out of it in O(n).
    Eigen::VectorXd sum_all = Eigen::VectorXd::Zero(n);
    auto rebuild_sum = [&] {
        sum_all.setZero();
        for (Eigen::Index i = 0; i <= n; ++i) sum_all += pts[i];
    };
    rebuild_sum();

    SimplexOutcome out;
    for (long iter = 0; iter < max_iter; ++iter) {
        const Eigen::Index best = idx[0], worst = idx[n], second = idx[n - 1];
        if (vals[worst] - vals[best] < ftol) {
            out.converged = true;
            break;
        }
        out.iterations = iter + 1;

        const Eigen::VectorXd centroid = (sum_all - pts[worst]) / static_cast<double>(n);

        auto replace_worst = [&](Eigen::VectorXd&& p, double v) {
            sum_all += p - pts[worst];
            pts[worst] = std::move(p);
            vals[worst] = v;
        };

        Eigen::VectorXd xr = centroid + alpha * (centroid - pts[worst]);
        const double fr = fn(xr);
        if (fr < vals[best]) {
            Eigen::VectorXd xe = centroid + beta * (xr - centroid);
            const double fe = fn(xe);
            if (fe < fr)
                replace_worst(std::move(xe), fe);
            else
                replace_worst(std::move(xr), fr);
        } else if (fr < vals[second]) {
            replace_worst(std::move(xr), fr);
        } else {
            bool outside = fr < vals[worst];
            Eigen::VectorXd xc =
                outside ? Eigen::VectorXd(centroid + gamma * (xr - centroid))
                        : Eigen::VectorXd(centroid - gamma * (centroid - pts[worst]));
            const double fc = fn(xc);
            if (fc < std::min(fr, vals[worst])) {
                replace_worst(std::move(xc), fc);
            } else {
                // shrink toward the best vertex
                for (Eigen::Index i = 1; i <= n; ++i) {
                    pts[idx[i]] = pts[idx[0]] + delta * (pts[idx[i]] - pts[idx[0]]);
                    vals[idx[i]] = fn(pts[idx[i]]);
                }
                rebuild_sum();
            }
        }

        order();
        if (iter % 1024 == 1023) rebuild_sum();  // keep FP drift in check
    }
    const Eigen::Index best = idx[0];
    out.x = pts[best];
    out.f = vals[best];
    return out;
}

// One optimizer start: passes of shrinking simplex radius re-seeded around
// the incumbent, which pulls high-dimensional simplices out of degeneracy.
// Deterministic constraints harden over the passes (penalty continuation),
// so early passes can cross the constraint manifold instead of crawling
// along it. The final radius repeats while the budget lasts and progress
// continues.
SimplexOutcome restarted_nelder_mead(
    const std::function<std::function<double(const Eigen::VectorXd&)>(double)>& make_score,
    Eigen::VectorXd x0, long max_iter, double ftol) {
    struct Pass {
        double radius;
        double weight_scale;
    };
    static constexpr Pass kPasses[] = {
        {0.5, 0.01}, {0.2, 0.1}, {0.08, 1.0}, {0.03, 1.0}, {0.01, 1.0}};
    static constexpr int kFixedPasses = static_cast<int>(std::size(kPasses));
    const long budget = std::max<long>(max_iter / (kFixedPasses + 1), 1);

    auto final_score = make_score(1.0);
    SimplexOutcome acc;
    acc.f = std::numeric_limits<double>::infinity();
    long used = 0;
    int pass_index = 0;
    while (used < max_iter) {
        const Pass pass = pass_index < kFixedPasses ? kPasses[pass_index]
                                                    : kPasses[kFixedPasses - 1];
        auto fn = pass.weight_scale == 1.0 ? final_score : make_score(pass.weight_scale);
        SimplexOutcome step =
            nelder_mead(fn, x0, pass.radius, std::min(budget, max_iter - used), ftol);
        used += std::max<long>(step.iterations, 1);
        acc.iterations = used;
        acc.converged = acc.converged || (step.converged && pass.weight_scale == 1.0);

        // compare at full weight so softened passes cannot fake progress
        const double f_full = pass.weight_scale == 1.0 ? step.f : final_score(step.x);
        const double improvement = acc.f - f_full;
        if (f_full < acc.f) {
            acc.f = f_full;
            acc.x = step.x;
        }
        x0 = acc.x;
        ++pass_index;
        if (pass_index >= kFixedPasses && improvement < ftol) {
            // stationary across consecutive full-weight passes
            acc.converged = true;
            break;
        }
    }
    return acc;
}

}  // namespace

int parameter_count(int d, int M) {
    if (d < 2) throw std::invalid_argument("local dimension must be >= 2");
    if (M < 1) throw std::invalid_argument("output count must be >= 1");
    const long long dd = static_cast<long long>(d) * d;
    return static_cast<int>(2 * dd * dd + (M - 1) * 2 * dd);
}

ChoiState parametrize_product_choi(const Eigen::VectorXd& params, int d, int M) {
    return assemble(decode(params, d, M), d, M);
}

double objective(const ChoiState& a, int k) {
    if (k < 1 || k > a.M) throw std::invalid_argument("favored index out of range");
    if (std::abs(a.matrix.trace().real() - 1.0) > 1e-10)
        throw std::invalid_argument("objective requires a unit-trace Choi state");
    const Vector phi = max_entangled_state(a.d).amplitudes();
    double acc = 0.0;
    for (int i = 1; i <= a.M; ++i) {
        Matrix a_i = reduced_choi(a, i);
        acc += (phi.adjoint() * a_i * phi)(0, 0).real();
    }
    return acc / a.M;
}

Eigen::VectorXd per_output_entanglement_fidelities(const ChoiState& a, int k) {
    if (k < 1 || k > a.M) throw std::invalid_argument("favored index out of range");
    const Vector phi = max_entangled_state(a.d).amplitudes();
    Eigen::VectorXd fe(a.M);
    const double tr = a.matrix.trace().real();
    for (int i = 1; i <= a.M; ++i) {
        Matrix a_i = reduced_choi(a, i);
        fe[i - 1] = (phi.adjoint() * a_i * phi)(0, 0).real() / tr;
    }
    return fe;
}

ChoiState project_deterministic(const ChoiState& product_choi, int k) {
    const int d = product_choi.d;
    const int M = product_choi.M;
    if (k < 1 || k > M) throw std::invalid_argument("favored index out of range");
    const std::vector<int> dims = product_choi.local_dims();

    Matrix x = partial_trace(product_choi.matrix, dims, {0, k});
    x /= x.trace().real();
    // A touch of the maximally mixed state keeps X_R invertible when the
    // incoming factor is rank deficient.
    const double eps = 1e-12;
    x = (1.0 - eps) * x + eps * Matrix::Identity(d * d, d * d) / (d * d);

    Matrix x_r = partial_trace(x, {d, d}, {0});
    HermitianSpectrum spec = hermitian_eig(Matrix((x_r + x_r.adjoint()) / 2.0));
    Matrix c = Matrix::Zero(d, d);
    for (int i = 0; i < d; ++i) {
        const double lam = std::max(spec.eigenvalues[i], 1e-300);
        c += spec.eigenvectors.col(i) * spec.eigenvectors.col(i).adjoint() /
             std::sqrt(d * lam);
    }
    Matrix filter = tensor_product(c, Matrix::Identity(d, d));
    Matrix x_proj = filter * x * filter.adjoint();
    x_proj = (x_proj + x_proj.adjoint()) / 2.0;
    x_proj /= x_proj.trace().real();

    std::vector<Matrix> factors;
    factors.push_back(x_proj);
    for (int l = 1; l <= M; ++l) {
        if (l == k) continue;
        Matrix y = partial_trace(product_choi.matrix, dims, {l});
        factors.push_back(y / y.trace().real());
    }

    std::vector<int> order(M + 1);
    order[0] = 0;
    for (int j = 1; j <= M; ++j) order[j] = (j == k) ? 1 : (j < k ? j + 1 : j);

    ChoiState out;
    out.d = d;
    out.M = M;
    out.matrix = permute_subsystems(kron_all(factors), dims, order);
    return out;
}

SearchResult optimize(const SearchConfig& config) {
    const int d = config.d, M = config.M;
    if (d < 2) throw std::invalid_argument("local dimension must be >= 2");
    if (M < 1) throw std::invalid_argument("output count must be >= 1");
    if (config.restarts < 1) throw std::invalid_argument("need at least one restart");
    if (config.convergence_tolerance <= 0.0)
        throw std::invalid_argument("convergence tolerance must be positive");
    const bool deterministic = is_deterministic(config.scenario);
    const bool symmetric = is_symmetric(config.scenario);
    if (deterministic && config.penalty_weight <= 0.0)
        throw std::invalid_argument("deterministic search needs a positive penalty weight");

    const int n_params = hermitian_parameter_count(d, M);
    const double weight = config.penalty_weight;

    auto make_score = [&](double weight_scale) {
        return std::function<double(const Eigen::VectorXd&)>(
            [=](const Eigen::VectorXd& params) {
                FactoredChoi f = decode_hermitian(params, d, M);
                Eigen::VectorXd fe = factored_fidelities(f, d, M);
                double base;
                if (symmetric) {
                    // Maximin, with a mild equalization pressure: the maximin
                    // value is also attained at unequal outputs, and ties must
                    // resolve to the all-equal point the symmetric condition
                    // means.
                    const double mn = fe.minCoeff();
                    base = mn - 0.01 * (fe.mean() - mn);
                } else {
                    base = fe.mean();
                }
                if (deterministic) {
                    const double v = det_violation(f, d);
                    base -= weight_scale * weight * v * v;
                }
                return -base;  // simplex minimizes
            });
    };

    auto run_restart = [&](int r) {
        std::mt19937_64 rng = make_rng(config.seed, static_cast<std::uint64_t>(r));
        std::normal_distribution<double> gauss(0.0, 1.0);
        Eigen::VectorXd x0(n_params);
        for (int i = 0; i < n_params; ++i) x0[i] = gauss(rng);
        return restarted_nelder_mead(make_score, std::move(x0), config.max_iterations,
                                     config.convergence_tolerance);
    };

    int tasks = config.task_count > 0 ? config.task_count : thread_count_from_env();
    std::vector<SimplexOutcome> outcomes(config.restarts);
    if (tasks <= 1) {
        for (int r = 0; r < config.restarts; ++r) outcomes[r] = run_restart(r);
    } else {
        std::vector<std::future<SimplexOutcome>> futures;
        futures.reserve(config.restarts);
        for (int r = 0; r < config.restarts; ++r)
            futures.push_back(std::async(std::launch::async, run_restart, r));
        for (int r = 0; r < config.restarts; ++r) outcomes[r] = futures[r].get();
    }

    long total_iterations = 0;
    int best = -1;
    bool any_converged = false;
    for (int r = 0; r < config.restarts; ++r) {
        total_iterations += outcomes[r].iterations;
        any_converged = any_converged || outcomes[r].converged;
        if (best < 0 || outcomes[r].f < outcomes[best].f) best = r;  // ties keep lowest r
    }
    if (!any_converged)
        throw NonconvergenceError("no restart reached the convergence tolerance",
                                  -outcomes[best].f);

    FactoredChoi f = decode_hermitian(outcomes[best].x, d, M);
    Eigen::VectorXd fe = factored_fidelities(f, d, M);

    SearchResult result;
    // Symmetric cases report the symmetric-feasible value, which is the
    // minimum over outputs; at the optimum all outputs coincide anyway.
    result.best_objective = symmetric ? fe.minCoeff() : fe.mean();
    double f_bar = 0.0;
    for (int i = 0; i < M; ++i) f_bar += average_from_entanglement(fe[i], d);
    result.best_f_bar = f_bar / M;
    result.gap_to_closed_form = std::abs(
        closed_form_mean_entanglement_fidelity(config.scenario, d, M) -
        result.best_objective);
    result.constraint_violation = deterministic ? det_violation(f, d) : 0.0;
    result.iterations_used = total_iterations;
    result.best_state = assemble(f, d, M);
    return result;
}

}  // namespace ucl
