#include "ucl/structure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "ucl/errors.hpp"

namespace ucl {

namespace {

constexpr double kProportionalityTol = 1e-8;

// Schmidt coefficients of w across the cut, after moving part A to the front.
std::vector<double> cut_schmidt_values(const Matrix& w, const std::vector<int>& dims,
                                       const std::vector<int>& part_a) {
    const int n = static_cast<int>(dims.size());
    if (part_a.empty() || part_a.size() >= dims.size())
        throw std::invalid_argument("cut must leave both sides nonempty");
    std::vector<char> in_a(n, 0);
    for (int s : part_a) {
        if (s < 0 || s >= n) throw std::invalid_argument("cut index out of range");
        if (in_a[s]) throw std::invalid_argument("duplicate cut index");
        in_a[s] = 1;
    }

    std::vector<int> order;
    order.reserve(n);
    long long dim_a = 1, dim_b = 1;
    for (int s = 0; s < n; ++s)
        if (in_a[s]) {
            order.push_back(s);
            dim_a *= dims[s];
        }
    for (int s = 0; s < n; ++s)
        if (!in_a[s]) {
            order.push_back(s);
            dim_b *= dims[s];
        }

    Matrix grouped = permute_subsystems(w, dims, order);
    OperatorSchmidt schmidt =
        operator_schmidt(grouped, static_cast<int>(dim_a), static_cast<int>(dim_b));
    return {schmidt.singular_values.data(),
            schmidt.singular_values.data() + schmidt.singular_values.size()};
}

// residual = sqrt(sum_{i>=1} s_i^2)/s_0; rank above the relative threshold.
std::pair<int, double> rank_and_residual(const std::vector<double>& sv) {
    if (sv.empty() || sv.front() <= 0.0)
        throw InconclusiveError("operator is numerically zero across the cut");
    const double cutoff = kSchmidtRankThreshold * sv.front();
    int rank = 0;
    double tail = 0.0;
    for (std::size_t i = 0; i < sv.size(); ++i) {
        if (sv[i] > cutoff) ++rank;
        if (i >= 1) tail += sv[i] * sv[i];
    }
    return {rank, std::sqrt(tail) / sv.front()};
}

ProductVerdict verdict_from_cuts(const Matrix& w, const std::vector<int>& dims,
                                 const std::vector<std::vector<int>>& cuts) {
    ProductVerdict v;
    v.is_product = true;
    v.worst_residual = 0.0;
    for (const auto& cut : cuts) {
        std::vector<double> sv = cut_schmidt_values(w, dims, cut);
        auto [rank, residual] = rank_and_residual(sv);
        v.schmidt_numbers.push_back(std::move(sv));
        v.is_product = v.is_product && rank == 1;
        v.worst_residual = std::max(v.worst_residual, residual);
    }
    return v;
}

}  // namespace

ProductVerdict is_product_form(const Matrix& w, const std::vector<int>& dims,
                               const Bipartition& cut) {
    return verdict_from_cuts(w, dims, {cut.part_a});
}

ProductVerdict verify_uncorrelated_choi(const ChoiState& a, int k) {
    if (k < 1 || k > a.M) throw std::invalid_argument("favored index out of range");
    if (a.M == 1) {
        ProductVerdict v;
        v.is_product = true;
        return v;
    }
    // Cut (R, S_k | rest), then isolate every other output in turn. Together
    // these pin the full X (x) Y_1 (x) ... (x) Y_{M-1} factorization; the
    // first cut alone cannot tell a factored tail from an entangled one.
    std::vector<std::vector<int>> cuts;
    cuts.push_back({0, k});
    for (int l = 1; l <= a.M; ++l)
        if (l != k) cuts.push_back({l});
    return verdict_from_cuts(a.matrix, a.local_dims(), cuts);
}

std::pair<bool, double> output_product_check(const Channel& ch, const PureState& psi) {
    const int d = local_dim(ch);
    const int M = output_count(ch);
    ChannelOutput out = apply_channel(ch, psi);
    if (!out.defined)
        throw InconclusiveError("zero-probability outcome has no output state");
    if (M == 1) return {true, 0.0};

    const std::vector<int> dims(M, d);
    bool all_product = true;
    double worst = 0.0;
    for (int i = 0; i < M; ++i) {
        std::vector<double> sv = cut_schmidt_values(out.state, dims, {i});
        auto [rank, residual] = rank_and_residual(sv);
        all_product = all_product && rank == 1;
        worst = std::max(worst, residual);
    }
    return {all_product, worst};
}

std::pair<bool, double> verify_output_uncorrelated(const Channel& ch, int n_samples,
                                                   std::uint64_t seed) {
    if (n_samples < 1) throw std::invalid_argument("need at least one sample");
    const int d = local_dim(ch);

    std::mt19937_64 rng = make_rng(seed, 0);
    bool all_product = true;
    double worst = 0.0;
    int usable = 0;
    for (int s = 0; s < n_samples; ++s) {
        PureState psi = haar_state(d, rng);
        ChannelOutput out = apply_channel(ch, psi);
        if (out.probability <= 1e-9) continue;
        ++usable;
        auto [product, residual] = output_product_check(ch, psi);
        all_product = all_product && product;
        worst = std::max(worst, residual);
    }
    if (usable == 0)
        throw InconclusiveError("every sampled input had zero success probability");
    return {all_product, worst};
}

bool lemma2_criterion(const ChoiState& a, int k, int n_probe, std::uint64_t seed) {
    if (k < 1 || k > a.M) throw std::invalid_argument("favored index out of range");
    if (n_probe < 1) throw std::invalid_argument("need at least one probe");

    const int d = a.d;
    long long rest_dim = 1;
    for (int i = 0; i < a.M - 1; ++i) rest_dim *= d;

    // Group (R, S_k) in front once; probes then contract leading indices.
    std::vector<int> order;
    order.push_back(0);
    order.push_back(k);
    for (int l = 1; l <= a.M; ++l)
        if (l != k) order.push_back(l);
    Matrix grouped = permute_subsystems(a.matrix, a.local_dims(), order);

    Matrix tr_rsk = Matrix::Zero(rest_dim, rest_dim);
    const long long front_dim = static_cast<long long>(d) * d;
    for (long long x = 0; x < front_dim; ++x)
        tr_rsk += grouped.block(x * rest_dim, x * rest_dim, rest_dim, rest_dim);
    const double tr_norm = tr_rsk.norm();
    if (tr_norm < 1e-14)
        throw InconclusiveError("partial trace over R,S_k is numerically zero");

    std::mt19937_64 rng = make_rng(seed, 0);
    for (int probe = 0; probe < n_probe; ++probe) {
        const Vector psi = haar_state(static_cast<int>(front_dim), rng).amplitudes();
        const Vector phi = haar_state(static_cast<int>(front_dim), rng).amplitudes();
        Matrix block = Matrix::Zero(rest_dim, rest_dim);
        for (long long x = 0; x < front_dim; ++x)
            for (long long y = 0; y < front_dim; ++y) {
                Complex w = std::conj(psi[x]) * phi[y];
                block.noalias() += w * grouped.block(x * rest_dim, y * rest_dim,
                                                     rest_dim, rest_dim);
            }
        const double block_norm = block.norm();
        if (block_norm < 1e-14 * tr_norm) continue;  // zero is proportional
        const Complex c =
            (tr_rsk.conjugate().cwiseProduct(block)).sum() / (tr_norm * tr_norm);
        const double residual = (block - c * tr_rsk).norm();
        if (residual > kProportionalityTol * block_norm) return false;
    }
    return true;
}

bool lemma1_proportionality(const Matrix& w, int dim_a, int dim_b) {
    if (static_cast<long long>(dim_a) * dim_b != w.rows() || w.rows() != w.cols())
        throw std::invalid_argument("bipartition dims do not match operator dimension");

    // Blocks <zeta|W|eta> in the computational basis of side A. A product
    // operator has every block proportional to a single common matrix.
    Eigen::Index best_z = 0, best_e = 0;
    double best_norm = -1.0;
    for (int z = 0; z < dim_a; ++z)
        for (int e = 0; e < dim_a; ++e) {
            double n = w.block(z * dim_b, e * dim_b, dim_b, dim_b).norm();
            if (n > best_norm) {
                best_norm = n;
                best_z = z;
                best_e = e;
            }
        }
    if (best_norm < 1e-14)
        throw InconclusiveError("operator is numerically zero");

    const Matrix ref = w.block(best_z * dim_b, best_e * dim_b, dim_b, dim_b);
    const double ref_sq = ref.squaredNorm();
    for (int z = 0; z < dim_a; ++z)
        for (int e = 0; e < dim_a; ++e) {
            const Matrix block = w.block(z * dim_b, e * dim_b, dim_b, dim_b);
            const Complex c = (ref.conjugate().cwiseProduct(block)).sum() / ref_sq;
            const double residual = (block - c * ref).norm();
            if (residual > kProportionalityTol * std::max(block.norm(), best_norm))
                return false;
        }
    return true;
}

}  // namespace ucl
