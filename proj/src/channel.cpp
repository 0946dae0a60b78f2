#include "ucl/channel.hpp"

#include <cmath>
#include <stdexcept>

#include "ucl/optima.hpp"

namespace ucl {

namespace {

long long ipow(int base, int exp) {
    long long p = 1;
    for (int i = 0; i < exp; ++i) p *= base;
    return p;
}

void check_channel_shape(int d, int M) {
    if (d < 1) throw std::invalid_argument("local dimension must be >= 1");
    if (M < 1) throw std::invalid_argument("output count must be >= 1");
}

}  // namespace

std::string to_string(Case c) {
    switch (c) {
        case Case::DetSym: return "det-sym";
        case Case::DetAsym: return "det-asym";
        case Case::ProbSym: return "prob-sym";
        case Case::ProbAsym: return "prob-asym";
    }
    throw std::logic_error("unreachable");
}

Case case_from_string(const std::string& s) {
    if (s == "det-sym") return Case::DetSym;
    if (s == "det-asym") return Case::DetAsym;
    if (s == "prob-sym") return Case::ProbSym;
    if (s == "prob-asym") return Case::ProbAsym;
    throw std::invalid_argument("unknown case '" + s +
                                "' (expected det-sym, det-asym, prob-sym or prob-asym)");
}

bool is_deterministic(Case c) { return c == Case::DetSym || c == Case::DetAsym; }
bool is_symmetric(Case c) { return c == Case::DetSym || c == Case::ProbSym; }

void ChoiState::validate() const {
    check_channel_shape(d, M);
    const long long dim = ipow(d, M + 1);
    if (matrix.rows() != dim || matrix.cols() != dim)
        throw std::invalid_argument("Choi matrix dimension does not equal d^(M+1)");
    HermitianSpectrum spec = hermitian_eig(matrix);
    if (spec.eigenvalues.minCoeff() < -1e-10)
        throw std::invalid_argument("Choi matrix is not positive semidefinite");
    double tr = matrix.trace().real();
    if (!(tr > 0.0) || tr > 1.0 + 1e-10)
        throw std::invalid_argument("Choi trace must lie in (0, 1]");
}

void FilterChannel::validate() const {
    check_channel_shape(d, M);
    if (k < 1 || k > M) throw std::invalid_argument("favored slot k out of range");
    if (filter.rows() != d || filter.cols() != d)
        throw std::invalid_argument("filter must be a d x d matrix");
    if (static_cast<int>(attached.size()) != M - 1)
        throw std::invalid_argument("expected M-1 attached states");
    for (const PureState& s : attached)
        if (s.dim() != d) throw std::invalid_argument("attached state dimension mismatch");
    // POVM element Pi_0 = filter^dag filter must satisfy Pi_0 <= I.
    HermitianSpectrum spec = hermitian_eig(Matrix(filter.adjoint() * filter));
    if (spec.eigenvalues.maxCoeff() > 1.0 + 1e-10)
        throw std::invalid_argument("filter^dag filter exceeds the identity");
}

ChannelOutput apply_choi(const ChoiState& a, const PureState& psi) {
    if (psi.dim() != a.d) throw std::invalid_argument("input dimension mismatch");
    const long long out_dim = ipow(a.d, a.M);

    // d <psi*_R| A |psi*_R> contracts the reference index:
    // out = d * sum_{r,r'} psi_r conj(psi_{r'}) A[(r,.),(r',.)]
    Matrix out = Matrix::Zero(out_dim, out_dim);
    const Vector& c = psi.amplitudes();
    for (int r = 0; r < a.d; ++r)
        for (int rp = 0; rp < a.d; ++rp) {
            Complex w = c[r] * std::conj(c[rp]);
            if (std::abs(w) < 1e-300) continue;
            out.noalias() += w * a.matrix.block(r * out_dim, rp * out_dim, out_dim, out_dim);
        }
    out *= static_cast<double>(a.d);

    ChannelOutput result;
    result.probability = out.trace().real();
    if (result.probability < 1e-12) {
        result.probability = std::max(result.probability, 0.0);
        result.defined = false;
        return result;
    }
    result.state = out / result.probability;
    result.defined = true;
    return result;
}

ChannelOutput apply_filter(const FilterChannel& ch, const PureState& psi) {
    if (psi.dim() != ch.d) throw std::invalid_argument("input dimension mismatch");

    Vector filtered = ch.filter * psi.amplitudes();
    ChannelOutput result;
    result.probability = filtered.squaredNorm();
    if (result.probability < 1e-12) {
        result.probability = std::max(result.probability, 0.0);
        result.defined = false;
        return result;
    }
    filtered /= filtered.norm();

    Vector joint(1);
    joint[0] = 1.0;
    int next_attached = 0;
    for (int slot = 1; slot <= ch.M; ++slot) {
        const Vector& factor =
            (slot == ch.k) ? filtered : ch.attached[next_attached++].amplitudes();
        joint = tensor_product(joint, factor);
    }
    result.state = joint * joint.adjoint();
    result.defined = true;
    return result;
}

ChannelOutput apply_channel(const Channel& ch, const PureState& psi) {
    if (std::holds_alternative<FilterChannel>(ch))
        return apply_filter(std::get<FilterChannel>(ch), psi);
    return apply_choi(std::get<ChoiState>(ch), psi);
}

ChoiState choi_of_filter(const FilterChannel& ch) {
    ch.validate();

    // T |v> = attached states with filter|v> placed on slot k.
    Matrix t = Matrix::Identity(1, 1);
    int next_attached = 0;
    for (int slot = 1; slot <= ch.M; ++slot) {
        Matrix factor;
        if (slot == ch.k) {
            factor = ch.filter;
        } else {
            const Vector& a = ch.attached[next_attached++].amplitudes();
            factor = Matrix(a.size(), 1);
            factor.col(0) = a;
        }
        t = tensor_product(t, factor);
    }

    ChoiState choi;
    choi.d = ch.d;
    choi.M = ch.M;
    Matrix lift = tensor_product(Matrix::Identity(ch.d, ch.d), t);  // (d*d^M) x d^2
    choi.matrix = lift * max_entangled_projector(ch.d) * lift.adjoint();
    return choi;
}

ChoiState choi_of(const Channel& ch) {
    if (std::holds_alternative<FilterChannel>(ch))
        return choi_of_filter(std::get<FilterChannel>(ch));
    return std::get<ChoiState>(ch);
}

Channel build_optimal_channel(Case c, int d, int M, int k) {
    if (d < 2) throw std::invalid_argument("local dimension must be >= 2");
    if (M < 1) throw std::invalid_argument("output count must be >= 1");
    if (k < 1 || k > M) throw std::invalid_argument("favored slot k out of range");

    switch (c) {
        case Case::ProbAsym: {
            FilterChannel ch;
            ch.d = d;
            ch.M = M;
            ch.k = k;
            const double gamma = xi_gamma(d, M).second;
            ch.filter = Matrix::Identity(d, d) * gamma;
            ch.filter(0, 0) = 1.0;
            ch.attached.assign(M - 1, PureState::basis(d, 0));
            return ch;
        }
        case Case::ProbSym: {
            FilterChannel ch;
            ch.d = d;
            ch.M = M;
            ch.k = k;
            ch.filter = Matrix::Zero(d, d);
            ch.filter(0, 0) = 1.0;  // |0><0|
            ch.attached.assign(M - 1, PureState::basis(d, 0));
            return ch;
        }
        case Case::DetAsym: {
            // psi -> psi on S_k, maximally mixed elsewhere:
            // A = P+_{R S_k} (x) (I/d)^(M-1), reordered to R, S_1..S_M.
            std::vector<Matrix> factors;
            factors.push_back(max_entangled_projector(d));
            for (int l = 0; l < M - 1; ++l)
                factors.push_back(Matrix::Identity(d, d) / static_cast<double>(d));
            Matrix a = kron_all(factors);

            // Built order is R, S_k, then the remaining outputs ascending.
            std::vector<int> order(M + 1);
            order[0] = 0;
            for (int j = 1; j <= M; ++j)
                order[j] = (j == k) ? 1 : (j < k ? j + 1 : j);
            ChoiState choi;
            choi.d = d;
            choi.M = M;
            choi.matrix = permute_subsystems(a, std::vector<int>(M + 1, d), order);
            return choi;
        }
        case Case::DetSym: {
            const long long dim = ipow(d, M + 1);
            ChoiState choi;
            choi.d = d;
            choi.M = M;
            choi.matrix = Matrix::Identity(dim, dim) / static_cast<double>(dim);
            return choi;
        }
    }
    throw std::logic_error("unreachable");
}

Matrix reduced_choi(const ChoiState& a, int i) {
    if (i < 1 || i > a.M) throw std::invalid_argument("output index out of range");
    return partial_trace(a.matrix, a.local_dims(), {0, i});
}

ChoiState measurement_based_cloner(int d, int M) {
    if (d < 2) throw std::invalid_argument("local dimension must be >= 2");
    if (M < 1) throw std::invalid_argument("output count must be >= 1");
    const long long dim = ipow(d, M + 1);
    ChoiState choi;
    choi.d = d;
    choi.M = M;
    choi.matrix = Matrix::Zero(dim, dim);
    // A = sum_i |i><i|/d (x) |i...i><i...i|
    for (int i = 0; i < d; ++i) {
        long long idx = i;
        for (int s = 0; s < M; ++s) idx = idx * d + i;
        choi.matrix(idx, idx) = 1.0 / d;
    }
    return choi;
}

int local_dim(const Channel& ch) {
    return std::visit([](const auto& c) { return c.d; }, ch);
}

int output_count(const Channel& ch) {
    return std::visit([](const auto& c) { return c.M; }, ch);
}

}  // namespace ucl
