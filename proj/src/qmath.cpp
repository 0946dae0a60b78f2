#include "ucl/qmath.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ucl {

namespace {

long long dims_product(const std::vector<int>& dims) {
    long long p = 1;
    for (int d : dims) {
        if (d < 1) throw std::invalid_argument("subsystem dimension must be >= 1");
        p *= d;
    }
    return p;
}

void check_square(const Matrix& w) {
    if (w.rows() != w.cols() || w.rows() < 1)
        throw std::invalid_argument("operator must be a square matrix of dim >= 1");
}

}  // namespace

PureState::PureState(Vector amplitudes) : amps_(std::move(amplitudes)) {
    if (amps_.size() < 1) throw std::invalid_argument("state dimension must be >= 1");
    double n = amps_.norm();
    if (std::abs(n - 1.0) > 1e-12)
        throw std::invalid_argument("state is not unit-norm (|norm-1| = " +
                                    std::to_string(std::abs(n - 1.0)) + ")");
}

PureState PureState::basis(int dim, int index) {
    if (dim < 1 || index < 0 || index >= dim)
        throw std::invalid_argument("basis index out of range");
    Vector v = Vector::Zero(dim);
    v[index] = 1.0;
    return PureState(std::move(v));
}

PureState PureState::from_unnormalized(Vector amplitudes) {
    double n = amplitudes.norm();
    if (n < 1e-300) throw std::invalid_argument("cannot normalize the zero vector");
    amplitudes /= n;
    return PureState(std::move(amplitudes));
}

PureState PureState::conjugated() const {
    return PureState(amps_.conjugate());
}

Matrix tensor_product(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Vector tensor_product(const Vector& a, const Vector& b) {
    Vector out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i)
        out.segment(i * b.size(), b.size()) = a[i] * b;
    return out;
}

Matrix kron_all(const std::vector<Matrix>& factors) {
    if (factors.empty()) return Matrix::Identity(1, 1);
    Matrix out = factors.front();
    for (std::size_t i = 1; i < factors.size(); ++i)
        out = tensor_product(out, factors[i]);
    return out;
}

Matrix partial_trace(const Matrix& w, const std::vector<int>& dims,
                     const std::vector<int>& keep) {
    check_square(w);
    const long long total = dims_product(dims);
    if (total != w.rows())
        throw std::invalid_argument("product of dims does not match operator dimension");

    const int n = static_cast<int>(dims.size());
    std::vector<char> kept(n, 0);
    for (int k : keep) {
        if (k < 0 || k >= n) throw std::invalid_argument("keep index out of range");
        if (kept[k]) throw std::invalid_argument("duplicate keep index");
        kept[k] = 1;
    }

    // Strides in the flat index, most-significant subsystem first.
    std::vector<long long> stride(n, 1);
    for (int s = n - 2; s >= 0; --s) stride[s] = stride[s + 1] * dims[s + 1];

    std::vector<int> keep_sorted, traced;
    for (int s = 0; s < n; ++s) (kept[s] ? keep_sorted : traced).push_back(s);

    long long keep_dim = 1, trace_dim = 1;
    for (int s : keep_sorted) keep_dim *= dims[s];
    for (int s : traced) trace_dim *= dims[s];

    // Flat offset of a composite index within the listed subsystems.
    auto offset = [&](const std::vector<int>& subs, long long composite) {
        long long off = 0;
        for (int idx = static_cast<int>(subs.size()) - 1; idx >= 0; --idx) {
            int s = subs[idx];
            off += (composite % dims[s]) * stride[s];
            composite /= dims[s];
        }
        return off;
    };

    std::vector<long long> keep_off(keep_dim), trace_off(trace_dim);
    for (long long i = 0; i < keep_dim; ++i) keep_off[i] = offset(keep_sorted, i);
    for (long long t = 0; t < trace_dim; ++t) trace_off[t] = offset(traced, t);

    Matrix out = Matrix::Zero(keep_dim, keep_dim);
    for (long long i = 0; i < keep_dim; ++i)
        for (long long j = 0; j < keep_dim; ++j) {
            Complex acc = 0.0;
            for (long long t = 0; t < trace_dim; ++t)
                acc += w(keep_off[i] + trace_off[t], keep_off[j] + trace_off[t]);
            out(i, j) = acc;
        }
    return out;
}

Matrix permute_subsystems(const Matrix& w, const std::vector<int>& dims,
                          const std::vector<int>& order) {
    check_square(w);
    const long long total = dims_product(dims);
    if (total != w.rows())
        throw std::invalid_argument("product of dims does not match operator dimension");
    const int n = static_cast<int>(dims.size());
    if (static_cast<int>(order.size()) != n)
        throw std::invalid_argument("order must list every subsystem once");
    std::vector<char> seen(n, 0);
    for (int s : order) {
        if (s < 0 || s >= n || seen[s]) throw std::invalid_argument("order is not a permutation");
        seen[s] = 1;
    }

    std::vector<long long> stride(n, 1);
    for (int s = n - 2; s >= 0; --s) stride[s] = stride[s + 1] * dims[s + 1];

    // map[i] = flat input index corresponding to flat output index i
    std::vector<long long> map(total);
    for (long long i = 0; i < total; ++i) {
        long long rem = i, off = 0;
        for (int pos = n - 1; pos >= 0; --pos) {
            int s = order[pos];
            off += (rem % dims[s]) * stride[s];
            rem /= dims[s];
        }
        map[i] = off;
    }

    Matrix out(total, total);
    for (long long i = 0; i < total; ++i)
        for (long long j = 0; j < total; ++j) out(i, j) = w(map[i], map[j]);
    return out;
}

HermitianSpectrum hermitian_eig(const Matrix& w) {
    check_square(w);
    double dev = (w - w.adjoint()).cwiseAbs().maxCoeff();
    if (dev > 1e-10)
        throw std::invalid_argument("operator is not Hermitian (max |W - W^dag| = " +
                                    std::to_string(dev) + ")");

    Eigen::SelfAdjointEigenSolver<Matrix> solver(w);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("eigendecomposition failed to converge");

    // Eigen returns ascending order; flip to descending.
    const Eigen::Index m = w.rows();
    HermitianSpectrum spec;
    spec.eigenvalues.resize(m);
    spec.eigenvectors.resize(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        spec.eigenvalues[i] = solver.eigenvalues()[m - 1 - i];
        spec.eigenvectors.col(i) = solver.eigenvectors().col(m - 1 - i);
    }
    return spec;
}

PureState haar_state(int d, std::mt19937_64& rng) {
    if (d < 1) throw std::invalid_argument("dimension must be >= 1");
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vector v(d);
    for (int i = 0; i < d; ++i) {
        double re = gauss(rng);
        double im = gauss(rng);
        v[i] = Complex(re, im);
    }
    return PureState::from_unnormalized(std::move(v));
}

PureState max_entangled_state(int d) {
    if (d < 1) throw std::invalid_argument("dimension must be >= 1");
    Vector v = Vector::Zero(static_cast<long long>(d) * d);
    const double c = 1.0 / std::sqrt(static_cast<double>(d));
    for (int i = 0; i < d; ++i) v[static_cast<long long>(i) * d + i] = c;
    return PureState(std::move(v));
}

Matrix max_entangled_projector(int d) {
    return max_entangled_state(d).projector();
}

Matrix identity(int dim) {
    return Matrix::Identity(dim, dim);
}

OperatorSchmidt operator_schmidt(const Matrix& w, int dim_a, int dim_b) {
    check_square(w);
    if (dim_a < 1 || dim_b < 1 ||
        static_cast<long long>(dim_a) * dim_b != w.rows())
        throw std::invalid_argument("bipartition dims do not match operator dimension");

    // Realignment: R[(a,a'),(b,b')] = W[(a,b),(a',b')].
    Matrix r(static_cast<long long>(dim_a) * dim_a,
             static_cast<long long>(dim_b) * dim_b);
    for (int a = 0; a < dim_a; ++a)
        for (int ap = 0; ap < dim_a; ++ap)
            for (int b = 0; b < dim_b; ++b)
                for (int bp = 0; bp < dim_b; ++bp)
                    r(a * dim_a + ap, b * dim_b + bp) =
                        w(static_cast<long long>(a) * dim_b + b,
                          static_cast<long long>(ap) * dim_b + bp);

    Eigen::JacobiSVD<Matrix> svd(r, Eigen::ComputeThinU | Eigen::ComputeThinV);

    OperatorSchmidt out;
    const Eigen::Index rank = svd.singularValues().size();
    out.singular_values = svd.singularValues();
    out.left_factors.reserve(rank);
    out.right_factors.reserve(rank);
    for (Eigen::Index i = 0; i < rank; ++i) {
        Matrix a(dim_a, dim_a), b(dim_b, dim_b);
        for (int x = 0; x < dim_a; ++x)
            for (int y = 0; y < dim_a; ++y) a(x, y) = svd.matrixU()(x * dim_a + y, i);
        for (int x = 0; x < dim_b; ++x)
            for (int y = 0; y < dim_b; ++y)
                b(x, y) = std::conj(svd.matrixV()(x * dim_b + y, i));
        out.left_factors.push_back(std::move(a));
        out.right_factors.push_back(std::move(b));
    }
    return out;
}

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream & 0xffffffffu),
                      static_cast<std::uint32_t>(stream >> 32)};
    return std::mt19937_64(seq);
}

}  // namespace ucl
