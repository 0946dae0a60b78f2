#include "ucl/fidelity.hpp"

#include <cmath>
#include <cstdlib>
#include <future>
#include <stdexcept>
#include <string>

#include "ucl/errors.hpp"

namespace ucl {

namespace {

int thread_count_from_env() {
    const char* env = std::getenv("UCL_THREADS");
    if (!env) return 1;
    int v = std::atoi(env);
    return v >= 1 ? v : 1;
}

// Running sums for the ratio estimator of every output, one sample chunk.
// X_i = p * f_i, Y = p; zero-probability samples contribute X = 0.
struct ChunkMoments {
    long long n = 0;
    double sum_y = 0.0, sum_yy = 0.0;
    std::vector<double> sum_x, sum_xx, sum_xy;

    explicit ChunkMoments(int outputs)
        : sum_x(outputs, 0.0), sum_xx(outputs, 0.0), sum_xy(outputs, 0.0) {}

    void add(const ChunkMoments& other) {
        n += other.n;
        sum_y += other.sum_y;
        sum_yy += other.sum_yy;
        for (std::size_t i = 0; i < sum_x.size(); ++i) {
            sum_x[i] += other.sum_x[i];
            sum_xx[i] += other.sum_xx[i];
            sum_xy[i] += other.sum_xy[i];
        }
    }
};

ChunkMoments run_chunk(const Channel& ch, long long n_samples, std::uint64_t seed,
                       std::uint64_t stream) {
    const int d = local_dim(ch);
    const int M = output_count(ch);
    const std::vector<int> out_dims(M, d);

    ChunkMoments m(M);
    std::mt19937_64 rng = make_rng(seed, stream);
    for (long long s = 0; s < n_samples; ++s) {
        PureState psi = haar_state(d, rng);
        ChannelOutput out = apply_channel(ch, psi);
        const double y = out.probability;
        ++m.n;
        m.sum_y += y;
        m.sum_yy += y * y;
        if (!out.defined) continue;
        for (int i = 0; i < M; ++i) {
            Matrix rho_i = partial_trace(out.state, out_dims, {i});
            double f = (psi.amplitudes().adjoint() * rho_i * psi.amplitudes())(0, 0).real();
            double x = y * f;
            m.sum_x[i] += x;
            m.sum_xx[i] += x * x;
            m.sum_xy[i] += x * y;
        }
    }
    return m;
}

ChunkMoments run_partitioned(const Channel& ch, long long n_samples, std::uint64_t seed,
                             int task_count) {
    if (task_count <= 0) task_count = thread_count_from_env();
    if (task_count > n_samples) task_count = static_cast<int>(n_samples);

    const int M = output_count(ch);
    ChunkMoments total(M);
    if (task_count <= 1) {
        total.add(run_chunk(ch, n_samples, seed, 0));
        return total;
    }

    const long long base = n_samples / task_count;
    const long long extra = n_samples % task_count;
    std::vector<std::future<ChunkMoments>> futures;
    futures.reserve(task_count);
    for (int t = 0; t < task_count; ++t) {
        long long chunk = base + (t < extra ? 1 : 0);
        futures.push_back(std::async(std::launch::async, run_chunk, std::cref(ch), chunk,
                                     seed, static_cast<std::uint64_t>(t)));
    }
    // Combine in task-index order so the result only depends on (seed, count).
    for (auto& f : futures) total.add(f.get());
    return total;
}

std::pair<double, double> ratio_estimate(const ChunkMoments& m, int i) {
    const double n = static_cast<double>(m.n);
    const double mean_y = m.sum_y / n;
    const double est = m.sum_x[i] / m.sum_y;
    if (m.n < 2) return {est, 0.0};
    // First-order delta method on X-bar / Y-bar.
    const double mean_x = m.sum_x[i] / n;
    const double var_x = (m.sum_xx[i] - n * mean_x * mean_x) / (n - 1);
    const double var_y = (m.sum_yy - n * mean_y * mean_y) / (n - 1);
    const double cov_xy = (m.sum_xy[i] - n * mean_x * mean_y) / (n - 1);
    double v = (var_x - 2.0 * est * cov_xy + est * est * var_y) / (n * mean_y * mean_y);
    return {est, std::sqrt(std::max(v, 0.0))};
}

}  // namespace

double entanglement_fidelity(const Matrix& a_rsi) {
    if (a_rsi.rows() != a_rsi.cols() || a_rsi.rows() < 1)
        throw std::invalid_argument("operator must be square");
    const int d = static_cast<int>(std::llround(std::sqrt(static_cast<double>(a_rsi.rows()))));
    if (static_cast<long long>(d) * d != a_rsi.rows())
        throw std::invalid_argument("operator dimension is not a perfect square");
    const double tr = a_rsi.trace().real();
    if (tr <= 1e-14)
        throw std::domain_error("entanglement fidelity undefined for zero-trace operator");
    const Vector phi = max_entangled_state(d).amplitudes();
    // Tr[P+ a] = <Phi+|a|Phi+> since P+ is rank one.
    const double overlap = (phi.adjoint() * a_rsi * phi)(0, 0).real();
    return overlap / tr;
}

double average_from_entanglement(double fe, int d) {
    if (d < 1) throw std::invalid_argument("dimension must be >= 1");
    return (d * fe + 1.0) / (d + 1.0);
}

std::pair<double, double> mc_average_fidelity(const Channel& ch, int i, int n_samples,
                                              std::uint64_t seed, int task_count) {
    const int M = output_count(ch);
    if (i < 1 || i > M) throw std::invalid_argument("output index out of range");
    if (n_samples < 1) throw std::invalid_argument("need at least one sample");

    ChunkMoments m = run_partitioned(ch, n_samples, seed, task_count);
    if (m.sum_y <= 0.0)
        throw EstimatorUndefinedError("all " + std::to_string(n_samples) +
                                      " samples had zero success probability");
    return ratio_estimate(m, i - 1);
}

FidelityReport full_report(const Channel& ch, int n_samples, std::uint64_t seed,
                           int task_count) {
    if (n_samples < 1) throw std::invalid_argument("need at least one sample");
    const int M = output_count(ch);

    ChunkMoments m = run_partitioned(ch, n_samples, seed, task_count);
    if (m.sum_y <= 0.0)
        throw EstimatorUndefinedError("all " + std::to_string(n_samples) +
                                      " samples had zero success probability");

    FidelityReport report;
    report.per_output.reserve(M);
    report.mc_standard_errors.reserve(M);
    double acc = 0.0;
    for (int i = 0; i < M; ++i) {
        auto [est, se] = ratio_estimate(m, i);
        report.per_output.push_back(est);
        report.mc_standard_errors.push_back(se);
        acc += est;
    }
    report.mean = acc / M;
    report.mean_success_probability = m.sum_y / static_cast<double>(m.n);
    return report;
}

}  // namespace ucl
