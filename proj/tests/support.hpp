#pragma once

// Random test inputs and small independent oracles.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include "elaa/numerics.hpp"
#include "elaa/rng.hpp"

namespace elaa::testing {

inline ComplexMatrix random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
    Rng rng(seed);
    ComplexMatrix out(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) out(i, j) = rng.complex_normal();
    return out;
}

inline ComplexVector random_vector(Eigen::Index n, std::uint64_t seed) {
    return random_matrix(n, 1, seed).col(0);
}

/// Orthonormal columns by modified Gram-Schmidt on a random matrix.
inline ComplexMatrix random_orthonormal(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
    ComplexMatrix q = random_matrix(rows, cols, seed);
    for (Eigen::Index j = 0; j < cols; ++j) {
        for (int pass = 0; pass < 2; ++pass)
            for (Eigen::Index k = 0; k < j; ++k) q.col(j) -= q.col(k) * q.col(k).dot(q.col(j));
        q.col(j) /= q.col(j).norm();
    }
    return q;
}

/// B^H B + shift I.
inline ComplexMatrix random_hpd(Eigen::Index n, std::uint64_t seed, double shift = 0.1) {
    const ComplexMatrix b = random_matrix(n, n, seed);
    ComplexMatrix a = b.adjoint() * b;
    a += shift * ComplexMatrix::Identity(n, n);
    return (a + a.adjoint()) * 0.5;
}

/// Eigenvalues (descending) of a 2x2 Hermitian [[a, c], [conj(c), b]].
inline std::pair<double, double> hermitian2_eigs(double a, double b, std::complex<double> c) {
    const double mid = 0.5 * (a + b);
    const double rad = std::sqrt(0.25 * (a - b) * (a - b) + std::norm(c));
    return {mid + rad, mid - rad};
}

/// Eigenvalues (descending) of a 3x3 Hermitian matrix from its characteristic
/// polynomial, solved with the trigonometric form of the cubic.
inline std::vector<double> hermitian3_eigs(const ComplexMatrix& m) {
    const double a11 = m(0, 0).real(), a22 = m(1, 1).real(), a33 = m(2, 2).real();
    const std::complex<double> a12 = m(0, 1), a13 = m(0, 2), a23 = m(1, 2);
    // det(lambda I - M) = lambda^3 - c2 lambda^2 + c1 lambda - c0
    const double c2 = a11 + a22 + a33;
    const double c1 = a11 * a22 + a11 * a33 + a22 * a33 - std::norm(a12) - std::norm(a13) - std::norm(a23);
    const double c0 = a11 * a22 * a33 + 2.0 * std::real(a12 * a23 * std::conj(a13)) - a11 * std::norm(a23) -
                      a22 * std::norm(a13) - a33 * std::norm(a12);
    // Depressed cubic with lambda = t + c2 / 3: t^3 + p t + q = 0.
    const double shift = c2 / 3.0;
    const double p = c1 - c2 * c2 / 3.0;
    const double q = -2.0 * c2 * c2 * c2 / 27.0 + c2 * c1 / 3.0 - c0;
    const double r = std::sqrt(-p / 3.0);
    const double arg = std::clamp(3.0 * q / (2.0 * p * r), -1.0, 1.0);
    const double phi = std::acos(arg) / 3.0;
    std::vector<double> out;
    for (int k = 0; k < 3; ++k) out.push_back(shift + 2.0 * r * std::cos(phi - 2.0 * std::numbers::pi * k / 3.0));
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

inline double relative_error(const ComplexVector& got, const ComplexVector& want) {
    return (got - want).norm() / want.norm();
}

}  // namespace elaa::testing
