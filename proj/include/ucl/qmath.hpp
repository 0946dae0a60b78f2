#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace ucl {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Relative cutoff below which an operator Schmidt coefficient counts as zero.
inline constexpr double kSchmidtRankThreshold = 1e-8;

// Unit-norm complex vector. The norm is checked on construction (1e-12)
// so downstream code can rely on it.
class PureState {
public:
    explicit PureState(Vector amplitudes);

    // |index> in a dim-dimensional space.
    static PureState basis(int dim, int index);
    // Normalizes whatever it is given; throws on the zero vector.
    static PureState from_unnormalized(Vector amplitudes);

    int dim() const { return static_cast<int>(amps_.size()); }
    const Vector& amplitudes() const { return amps_; }
    Matrix projector() const { return amps_ * amps_.adjoint(); }
    // Entrywise complex conjugate in the computational basis.
    PureState conjugated() const;

private:
    Vector amps_;
};

// Eigendecomposition of a Hermitian operator, eigenvalues descending,
// eigenvector i in column i of `eigenvectors`.
struct HermitianSpectrum {
    Eigen::VectorXd eigenvalues;
    Matrix eigenvectors;
};

// W = sum_i s_i A_i (x) B_i with Frobenius-orthonormal factors and
// descending nonnegative coefficients.
struct OperatorSchmidt {
    Eigen::VectorXd singular_values;
    std::vector<Matrix> left_factors;   // dim_a x dim_a
    std::vector<Matrix> right_factors;  // dim_b x dim_b
};

// Kronecker product, a's indices most significant.
Matrix tensor_product(const Matrix& a, const Matrix& b);
Vector tensor_product(const Vector& a, const Vector& b);
Matrix kron_all(const std::vector<Matrix>& factors);

// Trace out every subsystem not listed in `keep`. `dims` are the local
// dimensions in most-significant-first order; their product must equal
// the dimension of w. Kept subsystems stay in their original relative order.
Matrix partial_trace(const Matrix& w, const std::vector<int>& dims,
                     const std::vector<int>& keep);

// Reorder subsystems: position j of the result holds subsystem order[j]
// of the input. `order` must be a permutation of 0..dims.size()-1.
Matrix permute_subsystems(const Matrix& w, const std::vector<int>& dims,
                          const std::vector<int>& order);

// Throws if w is not Hermitian within 1e-10 in max-entry norm.
HermitianSpectrum hermitian_eig(const Matrix& w);

// Exact Haar sample: d independent standard complex Gaussians, normalized.
PureState haar_state(int d, std::mt19937_64& rng);

// |Phi+><Phi+| on a d*d-dimensional bipartite space.
Matrix max_entangled_projector(int d);
PureState max_entangled_state(int d);

Matrix identity(int dim);

// Operator Schmidt decomposition across the (dim_a, dim_b) bipartition,
// computed by realigning w and taking an SVD.
OperatorSchmidt operator_schmidt(const Matrix& w, int dim_a, int dim_b);

// Independent generator for task `stream` of a run seeded with `seed`.
std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream = 0);

}  // namespace ucl
