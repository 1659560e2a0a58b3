#pragma once

// Dense complex kernels shared by the detectors and the UW-SVD scheme.
// Everything here is templated on the real scalar type; the *Matrix / *Vector
// aliases at the bottom fix it to double.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "elaa/errors.hpp"

namespace elaa {

template <typename Real>
using CMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using CVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
template <typename Real>
using RVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

using ComplexMatrix = CMatrix<double>;
using ComplexVector = CVector<double>;
using RealVector = RVector<double>;

/// Relative threshold below which a column set is treated as rank deficient.
inline constexpr double kRankTol = 1e-12;

template <typename Real>
struct SvdResult {
    CMatrix<Real> u;      // m x n, orthonormal columns
    RVector<Real> sigma;  // n, nonincreasing
    CMatrix<Real> v;      // n x n, unitary
};

struct SvdOptions {
    /// Use one-sided Jacobi instead of the Gram route below this sigma ratio.
    double gram_switch = 1e-6;
    /// The Gram route is rejected if ||U^H U - I||_max exceeds this.
    double orthogonality_tol = 1e-12;
    int max_sweeps = 64;
};

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& a) {
    for (Eigen::Index j = 0; j < a.cols(); ++j)
        for (Eigen::Index i = 0; i < a.rows(); ++i) {
            const auto z = a(i, j);
            if (!std::isfinite(std::real(z)) || !std::isfinite(std::imag(z))) return false;
        }
    return true;
}

/// max |(M^H M - I)_ij|
template <typename Derived>
auto orthonormality_defect(const Eigen::MatrixBase<Derived>& m) {
    using Scalar = typename Derived::Scalar;
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    const Matrix gram = m.adjoint() * m;
    return (gram - Matrix::Identity(m.cols(), m.cols())).cwiseAbs().maxCoeff();
}

namespace detail {

template <typename Real>
void sort_descending(SvdResult<Real>& r) {
    const auto n = r.sigma.size();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return r.sigma(a) > r.sigma(b); });
    SvdResult<Real> sorted{CMatrix<Real>(r.u.rows(), n), RVector<Real>(n), CMatrix<Real>(n, n)};
    for (Eigen::Index j = 0; j < n; ++j) {
        const auto src = order[static_cast<std::size_t>(j)];
        sorted.u.col(j) = r.u.col(src);
        sorted.sigma(j) = r.sigma(src);
        sorted.v.col(j) = r.v.col(src);
    }
    r = std::move(sorted);
}

// Columns of u whose singular value is zero carry no information; replace
// them with an orthonormal completion so the result still has orthonormal columns.
template <typename Real>
void complete_null_columns(SvdResult<Real>& r) {
    const Real floor = r.sigma.size() > 0 ? r.sigma(0) * std::numeric_limits<Real>::epsilon() : Real(0);
    Eigen::Index probe = 0;
    for (Eigen::Index j = 0; j < r.sigma.size(); ++j) {
        if (r.sigma(j) > floor && r.sigma(j) > Real(0)) continue;
        r.sigma(j) = Real(0);
        while (probe < r.u.rows()) {
            CVector<Real> e = CVector<Real>::Unit(r.u.rows(), probe++);
            for (Eigen::Index k = 0; k < r.u.cols(); ++k)
                if (k != j) e -= r.u.col(k) * r.u.col(k).dot(e);
            const Real nrm = e.norm();
            if (nrm > Real(0.5)) {
                r.u.col(j) = e / nrm;
                break;
            }
        }
    }
}

template <typename Real>
SvdResult<Real> gram_svd(const CMatrix<Real>& a) {
    const CMatrix<Real> gram = a.adjoint() * a;
    Eigen::SelfAdjointEigenSolver<CMatrix<Real>> eig(gram);
    if (eig.info() != Eigen::Success) throw NumericalError("economy_svd: Gram eigensolver did not converge");
    const Eigen::Index n = a.cols();
    SvdResult<Real> r{CMatrix<Real>(a.rows(), n), RVector<Real>(n), CMatrix<Real>(n, n)};
    for (Eigen::Index j = 0; j < n; ++j) r.v.col(j) = eig.eigenvectors().col(n - 1 - j);
    r.u = a * r.v;
    // Column norms of A V are more accurate than sqrt of the Gram eigenvalues.
    for (Eigen::Index j = 0; j < n; ++j) {
        r.sigma(j) = r.u.col(j).norm();
        if (r.sigma(j) > Real(0)) r.u.col(j) /= r.sigma(j);
    }
    sort_descending(r);
    return r;
}

// One-sided (Hestenes) Jacobi: rotate column pairs of W = A V until they are
// mutually orthogonal; then sigma_j = ||w_j|| and u_j = w_j / sigma_j.
template <typename Real>
SvdResult<Real> jacobi_svd(const CMatrix<Real>& a, int max_sweeps) {
    using Complex = std::complex<Real>;
    const Eigen::Index m = a.rows();
    const Eigen::Index n = a.cols();
    CMatrix<Real> w = a;
    CMatrix<Real> v = CMatrix<Real>::Identity(n, n);
    const Real tol = std::numeric_limits<Real>::epsilon() * static_cast<Real>(std::max<Eigen::Index>(m, 4));

    bool converged = false;
    for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
        converged = true;
        for (Eigen::Index p = 0; p + 1 < n; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                const Real alpha = w.col(p).squaredNorm();
                const Real beta = w.col(q).squaredNorm();
                const Complex gamma = w.col(p).dot(w.col(q));
                const Real g = std::abs(gamma);
                if (g == Real(0) || g <= tol * std::sqrt(alpha * beta)) continue;
                converged = false;
                const Complex phase = gamma / g;
                const Real zeta = (beta - alpha) / (Real(2) * g);
                const Real t = (zeta >= Real(0) ? Real(1) : Real(-1)) /
                               (std::abs(zeta) + std::sqrt(Real(1) + zeta * zeta));
                const Real c = Real(1) / std::sqrt(Real(1) + t * t);
                const Real s = c * t;
                // q is first rotated by conj(phase) so that <w_p, w_q> becomes real.
                const CVector<Real> wq = w.col(q) * std::conj(phase);
                const CVector<Real> wp = w.col(p);
                w.col(p) = c * wp - s * wq;
                w.col(q) = s * wp + c * wq;
                const CVector<Real> vq = v.col(q) * std::conj(phase);
                const CVector<Real> vp = v.col(p);
                v.col(p) = c * vp - s * vq;
                v.col(q) = s * vp + c * vq;
            }
        }
    }
    if (!converged)
        throw NumericalError("economy_svd: one-sided Jacobi did not converge in " +
                             std::to_string(max_sweeps) + " sweeps");

    SvdResult<Real> r{std::move(w), RVector<Real>(n), std::move(v)};
    for (Eigen::Index j = 0; j < n; ++j) {
        r.sigma(j) = r.u.col(j).norm();
        if (r.sigma(j) > Real(0)) r.u.col(j) /= r.sigma(j);
    }
    sort_descending(r);
    complete_null_columns(r);
    return r;
}

}  // namespace detail

/// Economy SVD of a tall matrix with few columns: a = u * diag(sigma) * v^H.
///
/// The cheap route eigendecomposes the n x n Gram matrix a^H a, which costs
/// O(m n^2) but squares the condition number. It is used only while the sigma
/// ratio stays above `gram_switch` and the resulting u passes the
/// orthogonality check; otherwise the factorization is redone with one-sided
/// Jacobi on a itself.
template <typename Derived>
auto economy_svd(const Eigen::MatrixBase<Derived>& input, const SvdOptions& opts = {}) {
    using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
    const CMatrix<Real> a = input;
    if (a.rows() < a.cols())
        throw DimensionError("economy_svd: expected rows >= cols, got " + std::to_string(a.rows()) + "x" +
                             std::to_string(a.cols()));
    if (a.cols() == 0) throw DimensionError("economy_svd: empty matrix");
    if (!all_finite(a)) throw NumericalError("economy_svd: non-finite input");

    auto r = detail::gram_svd<Real>(a);
    const Real top = r.sigma(0);
    const Real bottom = r.sigma(r.sigma.size() - 1);
    const bool gram_ok = top > Real(0) && bottom / top >= static_cast<Real>(opts.gram_switch) &&
                         orthonormality_defect(r.u) <= static_cast<Real>(opts.orthogonality_tol);
    if (gram_ok) return r;
    return detail::jacobi_svd<Real>(a, opts.max_sweeps);
}

/// Rotates each singular pair so the largest-magnitude entry of every v column
/// is real and positive. u * diag(sigma) * v^H is unchanged.
template <typename Real>
void normalize_phase(SvdResult<Real>& r) {
    for (Eigen::Index j = 0; j < r.v.cols(); ++j) {
        Eigen::Index pivot = 0;
        r.v.col(j).cwiseAbs().maxCoeff(&pivot);
        const auto z = r.v(pivot, j);
        const Real mag = std::abs(z);
        if (mag == Real(0)) continue;
        const std::complex<Real> unphase = std::conj(z) / mag;
        r.v.col(j) *= unphase;
        r.u.col(j) *= unphase;
        r.v(pivot, j) = std::complex<Real>(std::abs(r.v(pivot, j)), Real(0));
    }
}

/// Least-squares solve (H^H H)^{-1} H^H y through a thin SVD of H.
template <typename DerivedH, typename DerivedY>
auto pseudo_inverse_solve(const Eigen::MatrixBase<DerivedH>& h, const Eigen::MatrixBase<DerivedY>& y) {
    using Real = typename Eigen::NumTraits<typename DerivedH::Scalar>::Real;
    if (y.rows() != h.rows() || y.cols() != 1)
        throw DimensionError("pseudo_inverse_solve: y has " + std::to_string(y.rows()) + " rows, H has " +
                             std::to_string(h.rows()));
    if (h.rows() < h.cols()) throw RankDeficientError("pseudo_inverse_solve: H is wide");
    const CMatrix<Real> hm = h;
    Eigen::BDCSVD<CMatrix<Real>> svd(hm, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& s = svd.singularValues();
    if (s(0) <= Real(0) || s(s.size() - 1) <= static_cast<Real>(kRankTol) * s(0))
        throw RankDeficientError("pseudo_inverse_solve: sigma_min/sigma_max = " +
                                 std::to_string(static_cast<double>(s(s.size() - 1) / s(0))));
    const CVector<Real> coeff = (svd.matrixU().adjoint() * y).cwiseQuotient(s.template cast<std::complex<Real>>());
    return CVector<Real>(svd.matrixV() * coeff);
}

/// 2-norm condition number sigma_max / sigma_min; +inf when sigma_min is zero.
template <typename Derived>
auto condition_number(const Eigen::MatrixBase<Derived>& a) {
    using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
    if (a.rows() == 0 || a.cols() == 0) throw DimensionError("condition_number: empty matrix");
    const CMatrix<Real> am = a;
    Eigen::BDCSVD<CMatrix<Real>> svd(am);
    const auto& s = svd.singularValues();
    const Real smin = s(s.size() - 1);
    if (smin <= Real(0)) return std::numeric_limits<Real>::infinity();
    return s(0) / smin;
}

/// max |eigenvalue| from a full Hessenberg-QR eigensolve.
template <typename Derived>
auto spectral_radius(const Eigen::MatrixBase<Derived>& b) {
    using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
    if (b.rows() != b.cols()) throw DimensionError("spectral_radius: matrix is not square");
    if (!all_finite(b)) throw NumericalError("spectral_radius: non-finite input");
    const CMatrix<Real> bm = b;
    if (bm.cwiseAbs().maxCoeff() == Real(0)) return Real(0);
    Eigen::ComplexEigenSolver<CMatrix<Real>> eig(bm, false);
    if (eig.info() != Eigen::Success) throw NumericalError("spectral_radius: eigensolver did not converge");
    return eig.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace elaa
