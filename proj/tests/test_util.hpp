#pragma once

#include <random>

#include "ucl/qmath.hpp"

namespace ucl::testing {

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

// Generic complex matrix with standard Gaussian entries.
inline Matrix random_matrix(int rows, int cols, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = Complex(gauss(rng), gauss(rng));
    return m;
}

inline Matrix random_hermitian(int dim, std::mt19937_64& rng) {
    Matrix g = random_matrix(dim, dim, rng);
    return (g + g.adjoint()) / 2.0;
}

inline Matrix random_psd(int dim, std::mt19937_64& rng) {
    Matrix g = random_matrix(dim, dim, rng);
    return g * g.adjoint();
}

inline Matrix random_density(int dim, std::mt19937_64& rng) {
    Matrix p = random_psd(dim, rng);
    return p / p.trace().real();
}

// Matrix with dyadic entries k/8, k in [-8, 8]: products of a few such
// values are exact in doubles, which lets tests assert bit equality.
inline Matrix random_dyadic(int dim, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> pick(-8, 8);
    Matrix m(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            m(i, j) = Complex(pick(rng) / 8.0, pick(rng) / 8.0);
    return m;
}

}  // namespace ucl::testing
