#pragma once

// Stationary iterative methods and memory-1 L-BFGS for Hermitian positive
// definite systems A x = b. Each method is a step function
// x_{t+1} = f(x_t; A, b) on an explicit IterState.

#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "elaa/numerics.hpp"

namespace elaa {

enum class Method { RI, JI, GS, SSOR, LBFGS };

inline std::string_view to_string(Method m) {
    switch (m) {
        case Method::RI: return "RI";
        case Method::JI: return "JI";
        case Method::GS: return "GS";
        case Method::SSOR: return "SSOR";
        case Method::LBFGS: return "LBFGS";
    }
    return "?";
}

/// Case-insensitive; throws ConfigError on unknown names.
Method parse_method(std::string_view name);

inline bool is_splitting_method(Method m) { return m != Method::LBFGS; }

/// A = D + L + L^H with D real positive diagonal and L strictly lower.
template <typename Real>
class SplitSystem {
public:
    SplitSystem(CMatrix<Real> a, CVector<Real> b) : a_(std::move(a)), b_(std::move(b)) {
        if (a_.rows() != a_.cols() || a_.rows() == 0)
            throw DimensionError("SplitSystem: A must be square and non-empty");
        if (b_.size() != a_.rows()) throw DimensionError("SplitSystem: b length does not match A");
        if (!all_finite(a_) || !all_finite(b_)) throw NumericalError("SplitSystem: non-finite entries");
        const Real scale = a_.cwiseAbs().maxCoeff();
        const Real skew = (a_ - a_.adjoint()).cwiseAbs().maxCoeff();
        if (skew > Real(1e-12) * scale) throw NumericalError("SplitSystem: A is not Hermitian");
        const auto n = a_.rows();
        d_.resize(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            d_(i) = std::real(a_(i, i));
            if (!(d_(i) > Real(0))) throw NumericalError("SplitSystem: diagonal entry " + std::to_string(i) + " is not positive");
        }
        // Store the exactly Hermitian completion of the lower triangle.
        lower_ = a_.template triangularView<Eigen::Lower>();
        lower_.diagonal() = d_.template cast<std::complex<Real>>();
        a_ = lower_.template triangularView<Eigen::Lower>();
        a_.template triangularView<Eigen::StrictlyUpper>() = lower_.adjoint().template triangularView<Eigen::StrictlyUpper>();
    }

    const CMatrix<Real>& a() const noexcept { return a_; }
    const CVector<Real>& b() const noexcept { return b_; }
    const RVector<Real>& d() const noexcept { return d_; }
    /// D + L, the Gauss-Seidel preconditioner.
    const CMatrix<Real>& lower() const noexcept { return lower_; }
    /// Strict lower triangle L.
    CMatrix<Real> l() const {
        CMatrix<Real> out = lower_.template triangularView<Eigen::StrictlyLower>();
        return out;
    }
    Eigen::Index size() const noexcept { return a_.rows(); }

    CVector<Real> residual(const CVector<Real>& x) const { return a_ * x - b_; }

private:
    CMatrix<Real> a_;
    CVector<Real> b_;
    RVector<Real> d_;
    CMatrix<Real> lower_;
};

template <typename Real>
struct IterState {
    CVector<Real> x;
    CVector<Real> g;  // A x - b
    std::optional<CVector<Real>> prev_x;
    std::optional<CVector<Real>> prev_g;
    int t = 0;

    static IterState start(const SplitSystem<Real>& sys, CVector<Real> x0) {
        IterState s;
        s.g = sys.residual(x0);
        s.x = std::move(x0);
        return s;
    }
};

enum class InitPolicy { Zero, MatchedFilter };

struct DetectorSpec {
    Method method = Method::SSOR;
    int max_iters = 50;
    InitPolicy x0 = InitPolicy::Zero;
    /// L-BFGS only: use Theta = I instead of diag(A).
    bool theta_is_identity = false;
};

namespace detail {

template <typename Real>
void check_preconditioner(const SplitSystem<Real>& sys) {
    const Real dmax = sys.d().maxCoeff();
    for (Eigen::Index i = 0; i < sys.size(); ++i)
        if (sys.d()(i) <= Real(1e-14) * dmax)
            throw SingularPreconditionerError("diagonal entry " + std::to_string(i) + " is numerically zero");
}

}  // namespace detail

/// u = M^{-1} g for the splitting preconditioners:
///   RI: I,  JI: D,  GS: D + L,  SSOR: (D + L) D^{-1} (D + L)^H.
template <typename Real>
CVector<Real> apply_preconditioner_inverse(const SplitSystem<Real>& sys, Method method, const CVector<Real>& g) {
    switch (method) {
        case Method::RI: return g;
        case Method::JI:
            detail::check_preconditioner(sys);
            return g.cwiseQuotient(sys.d().template cast<std::complex<Real>>());
        case Method::GS:
            detail::check_preconditioner(sys);
            return sys.lower().template triangularView<Eigen::Lower>().solve(g);
        case Method::SSOR: {
            detail::check_preconditioner(sys);
            CVector<Real> w = sys.lower().template triangularView<Eigen::Lower>().solve(g);
            w = w.cwiseProduct(sys.d().template cast<std::complex<Real>>());
            return sys.lower().adjoint().template triangularView<Eigen::Upper>().solve(w);
        }
        case Method::LBFGS: break;
    }
    throw ConfigError("apply_preconditioner_inverse: not a splitting method");
}

/// x_{t+1} = x_t - M^{-1} g_t
template <typename Real>
IterState<Real> si_step(IterState<Real> state, const SplitSystem<Real>& sys, Method method) {
    if (!is_splitting_method(method)) throw ConfigError("si_step: method must be RI, JI, GS or SSOR");
    state.x -= apply_preconditioner_inverse(sys, method, state.g);
    state.g = sys.residual(state.x);
    ++state.t;
    return state;
}

/// Memory-1 L-BFGS with exact line search on q(x) = x^H A x / 2 - Re(b^H x).
///
/// The first step (no history) uses d_0 = -Theta g_0. Afterwards
///   d_t = -Theta g_t + s (y^H Theta g_t) / (s^H y),  s = x_t - x_{t-1}, y = g_t - g_{t-1}
///   xi_t = Re(g_t^H d_t) / (d_t^H A d_t),  x_{t+1} = x_t - xi_t d_t.
template <typename Real>
IterState<Real> lbfgs_step(IterState<Real> state, const SplitSystem<Real>& sys, bool theta_is_identity) {
    using Complex = std::complex<Real>;
    CVector<Real> theta_g = theta_is_identity ? state.g : state.g.cwiseQuotient(sys.d().template cast<Complex>());
    CVector<Real> dir = -theta_g;
    if (state.prev_x && state.prev_g) {
        const CVector<Real> s = state.x - *state.prev_x;
        const CVector<Real> y = state.g - *state.prev_g;
        const Real sy = std::real(s.dot(y));
        if (sy > Real(0)) dir += s * (y.dot(theta_g) / sy);
    }
    const Real dnorm2 = dir.squaredNorm();
    state.prev_x = state.x;
    state.prev_g = state.g;
    ++state.t;
    if (dnorm2 == Real(0)) return state;

    const CVector<Real> ad = sys.a() * dir;
    const Real curvature = std::real(dir.dot(ad));
    if (!(curvature > Real(1e-14) * sys.d().maxCoeff() * dnorm2))
        throw BreakdownError("lbfgs_step: d^H A d is not positive (t = " + std::to_string(state.t - 1) + ")");
    const Real xi = std::real(state.g.dot(dir)) / curvature;
    state.x -= xi * dir;
    state.g = sys.residual(state.x);
    return state;
}

template <typename Real>
struct Trajectory {
    std::vector<CVector<Real>> iterates;  // x_1 .. x_T
    std::vector<Real> residual_norms;     // ||g_t||
    std::vector<Real> error_norms;        // ||x_t - truth|| when a truth was supplied
    bool diverged = false;
};

/// Runs spec.max_iters steps from x_0. A step whose residual exceeds
/// 1e12 * ||b|| (or turns non-finite) ends the run with `diverged` set; that
/// iterate is not recorded.
template <typename Real>
Trajectory<Real> run_detector(const DetectorSpec& spec, const SplitSystem<Real>& sys,
                              const std::optional<CVector<Real>>& truth = std::nullopt) {
    if (spec.max_iters < 1) throw ConfigError("run_detector: max_iters must be >= 1");
    if (truth && truth->size() != sys.size()) throw DimensionError("run_detector: truth length mismatch");
    CVector<Real> x0 = spec.x0 == InitPolicy::Zero ? CVector<Real>::Zero(sys.size()) : sys.b();
    auto state = IterState<Real>::start(sys, std::move(x0));
    const Real limit = Real(1e12) * sys.b().norm();

    Trajectory<Real> out;
    out.iterates.reserve(static_cast<std::size_t>(spec.max_iters));
    for (int t = 0; t < spec.max_iters; ++t) {
        state = spec.method == Method::LBFGS ? lbfgs_step(std::move(state), sys, spec.theta_is_identity)
                                             : si_step(std::move(state), sys, spec.method);
        const Real rn = state.g.norm();
        if (!std::isfinite(rn) || rn > limit) {
            out.diverged = true;
            break;
        }
        out.iterates.push_back(state.x);
        out.residual_norms.push_back(rn);
        if (truth) out.error_norms.push_back((state.x - *truth).norm());
    }
    return out;
}

/// Dense I - M^{-1} A.
template <typename Real>
CMatrix<Real> iteration_matrix(const SplitSystem<Real>& sys, Method method) {
    const auto n = sys.size();
    CMatrix<Real> out = CMatrix<Real>::Identity(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const CVector<Real> col = sys.a().col(j);
        out.col(j) -= apply_preconditioner_inverse(sys, method, col);
    }
    return out;
}

template <typename Real>
Real iteration_matrix_radius(const SplitSystem<Real>& sys, Method method) {
    if (!is_splitting_method(method)) throw ConfigError("iteration_matrix_radius: not a splitting method");
    return spectral_radius(iteration_matrix(sys, method));
}

}  // namespace elaa
