#pragma once

// User-wise SVD preconditioning.
//
// Each user's column block is factored H_k = U_k S_k V_k^H, giving
// H = Psi * diag(S) * blockdiag(V)^H with Psi = [U_1, ..., U_K]. Detection then
// runs on A x = b with A = Psi^H Psi (unit diagonal) and b = Psi^H y, and the
// symbol estimate is recovered as s = blockdiag(V) * diag(S)^{-1} * x.
//
// Costs: the K block SVDs are O(M * sum N_k^2), forming A is O(M N^2), and the
// post-processing is O(sum N_k^2 + N) per estimate.

#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "elaa/detectors.hpp"
#include "elaa/numerics.hpp"

namespace elaa {

/// Per-user antenna counts N_k; columns of H are grouped in this order.
class UserPartition {
public:
    UserPartition() = default;
    explicit UserPartition(std::vector<Eigen::Index> sizes) : sizes_(std::move(sizes)) {
        if (sizes_.empty()) throw ConfigError("UserPartition: no users");
        offsets_.reserve(sizes_.size());
        Eigen::Index acc = 0;
        for (auto n : sizes_) {
            if (n < 1) throw ConfigError("UserPartition: every user needs at least one antenna");
            offsets_.push_back(acc);
            acc += n;
        }
        total_ = acc;
    }

    static UserPartition uniform(Eigen::Index users, Eigen::Index per_user) {
        if (users < 1) throw ConfigError("UserPartition: no users");
        return UserPartition(std::vector<Eigen::Index>(static_cast<std::size_t>(users), per_user));
    }

    std::size_t users() const noexcept { return sizes_.size(); }
    Eigen::Index size(std::size_t k) const { return sizes_.at(k); }
    Eigen::Index offset(std::size_t k) const { return offsets_.at(k); }
    Eigen::Index total() const noexcept { return total_; }
    const std::vector<Eigen::Index>& sizes() const noexcept { return sizes_; }

    bool operator==(const UserPartition&) const = default;

private:
    std::vector<Eigen::Index> sizes_;
    std::vector<Eigen::Index> offsets_;
    Eigen::Index total_ = 0;
};

template <typename Real>
struct UwSvdFactors {
    UserPartition partition;
    CMatrix<Real> psi;                    // M x N, block k = U_k
    RVector<Real> sigma;                  // N, block k = singular values of H_k
    std::vector<CMatrix<Real>> v_blocks;  // V_k, N_k x N_k
    CMatrix<Real> a;                      // Psi^H Psi
    std::optional<CVector<Real>> b_cached;

    /// blockdiag(V_1, ..., V_K) as a dense N x N matrix.
    CMatrix<Real> v_dense() const {
        const auto n = partition.total();
        CMatrix<Real> out = CMatrix<Real>::Zero(n, n);
        for (std::size_t k = 0; k < partition.users(); ++k) {
            const auto o = partition.offset(k);
            const auto nk = partition.size(k);
            out.block(o, o, nk, nk) = v_blocks[k];
        }
        return out;
    }

    /// Psi diag(sigma) blockdiag(V)^H
    CMatrix<Real> reconstruct() const {
        return psi * sigma.template cast<std::complex<Real>>().asDiagonal() * v_dense().adjoint();
    }
};

template <typename Real>
UwSvdFactors<Real> preprocess(const CMatrix<Real>& h, const UserPartition& partition,
                              const SvdOptions& opts = {}) {
    if (h.cols() != partition.total())
        throw DimensionError("preprocess: H has " + std::to_string(h.cols()) + " columns, partition has " +
                             std::to_string(partition.total()));
    if (h.rows() < h.cols()) throw DimensionError("preprocess: H must have at least as many rows as columns");

    UwSvdFactors<Real> f;
    f.partition = partition;
    f.psi.resize(h.rows(), h.cols());
    f.sigma.resize(h.cols());
    f.v_blocks.reserve(partition.users());
    for (std::size_t k = 0; k < partition.users(); ++k) {
        const auto o = partition.offset(k);
        const auto nk = partition.size(k);
        auto svd = economy_svd(h.middleCols(o, nk), opts);
        if (!(svd.sigma(0) > Real(0)) || svd.sigma(nk - 1) <= static_cast<Real>(kRankTol) * svd.sigma(0))
            throw RankDeficientError("preprocess: sub-channel of user " + std::to_string(k) + " is rank deficient", k);
        normalize_phase(svd);
        f.psi.middleCols(o, nk) = svd.u;
        f.sigma.segment(o, nk) = svd.sigma;
        f.v_blocks.push_back(std::move(svd.v));
    }
    const CMatrix<Real> gram = f.psi.adjoint() * f.psi;
    f.a = (gram + gram.adjoint()) * Real(0.5);
    return f;
}

/// b = Psi^H y
template <typename Real>
CVector<Real> form_b(const UwSvdFactors<Real>& f, const CVector<Real>& y) {
    if (y.size() != f.psi.rows())
        throw DimensionError("form_b: y has length " + std::to_string(y.size()) + ", expected " +
                             std::to_string(f.psi.rows()));
    return f.psi.adjoint() * y;
}

template <typename Real>
UwSvdFactors<Real> preprocess(const CMatrix<Real>& h, const UserPartition& partition, const CVector<Real>& y,
                              const SvdOptions& opts = {}) {
    auto f = preprocess(h, partition, opts);
    f.b_cached = form_b(f, y);
    return f;
}

template <typename Real>
SplitSystem<Real> uwsvd_system(const UwSvdFactors<Real>& f, const CVector<Real>& y) {
    return SplitSystem<Real>(f.a, f.b_cached ? *f.b_cached : form_b(f, y));
}

/// s = blockdiag(V) diag(sigma)^{-1} x, block by block.
template <typename Real>
CVector<Real> postprocess(const UwSvdFactors<Real>& f, const CVector<Real>& x_hat) {
    if (x_hat.size() != f.partition.total()) throw DimensionError("postprocess: x has the wrong length");
    const Real smax = f.sigma.maxCoeff();
    for (Eigen::Index i = 0; i < f.sigma.size(); ++i)
        if (f.sigma(i) <= Real(1e-14) * smax)
            throw SingularSigmaError("postprocess: singular value " + std::to_string(i) + " is numerically zero");
    CVector<Real> s(x_hat.size());
    for (std::size_t k = 0; k < f.partition.users(); ++k) {
        const auto o = f.partition.offset(k);
        const auto nk = f.partition.size(k);
        const CVector<Real> scaled =
            x_hat.segment(o, nk).cwiseQuotient(f.sigma.segment(o, nk).template cast<std::complex<Real>>());
        s.segment(o, nk) = f.v_blocks[k] * scaled;
    }
    return s;
}

/// Zero-forcing estimate through the equivalent model y = Psi x + z.
template <typename Real>
CVector<Real> zf_via_uwsvd(const CMatrix<Real>& h, const UserPartition& partition, const CVector<Real>& y) {
    const auto f = preprocess(h, partition);
    return postprocess(f, CVector<Real>(pseudo_inverse_solve(f.psi, y)));
}

template <typename Real>
struct ConditioningReport {
    Real cond_a;      // cond(Psi^H Psi)
    Real cond_a_bar;  // cond(H^H H)
};

template <typename Real>
ConditioningReport<Real> conditioning_report(const CMatrix<Real>& h, const UserPartition& partition) {
    const auto f = preprocess(h, partition);
    const CMatrix<Real> a_bar = h.adjoint() * h;
    return {condition_number(f.a), condition_number(a_bar)};
}

}  // namespace elaa
