#include "doctest.h"
#include "elaa/channel.hpp"
#include "elaa/detectors.hpp"
#include "support.hpp"

using namespace elaa;
using namespace elaa::testing;

namespace {

// Independent triangular solves written out element by element.
ComplexVector forward_subst(const ComplexMatrix& lower, const ComplexVector& rhs) {
    const auto n = rhs.size();
    ComplexVector x(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        std::complex<double> acc = rhs(i);
        for (Eigen::Index j = 0; j < i; ++j) acc -= lower(i, j) * x(j);
        x(i) = acc / lower(i, i);
    }
    return x;
}

ComplexVector back_subst(const ComplexMatrix& upper, const ComplexVector& rhs) {
    const auto n = rhs.size();
    ComplexVector x(n);
    for (Eigen::Index i = n - 1; i >= 0; --i) {
        std::complex<double> acc = rhs(i);
        for (Eigen::Index j = i + 1; j < n; ++j) acc -= upper(i, j) * x(j);
        x(i) = acc / upper(i, i);
    }
    return x;
}

double objective(const SplitSystem<double>& sys, const ComplexVector& x) {
    return 0.5 * std::real(x.dot(sys.a() * x)) - std::real(sys.b().dot(x));
}

SplitSystem<double> random_system(Eigen::Index n, std::uint64_t seed) {
    return SplitSystem<double>(random_hpd(n, seed), random_vector(n, seed + 500));
}

}  // namespace

TEST_CASE("SplitSystem splits A = D + L + L^H") {
    const auto sys = random_system(5, 1);
    const ComplexMatrix d = sys.d().cast<std::complex<double>>().asDiagonal();
    const ComplexMatrix l = sys.l();
    CHECK((d + l + l.adjoint() - sys.a()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((sys.lower() - (d + l)).cwiseAbs().maxCoeff() == 0.0);

    ComplexMatrix skew = random_hpd(3, 2);
    skew(0, 1) += 0.5;
    CHECK_THROWS_AS(SplitSystem<double>(skew, random_vector(3, 1)), NumericalError);
    ComplexMatrix neg = ComplexMatrix::Identity(2, 2);
    neg(1, 1) = -1.0;
    CHECK_THROWS_AS(SplitSystem<double>(neg, random_vector(2, 1)), NumericalError);
    CHECK_THROWS_AS(SplitSystem<double>(ComplexMatrix::Identity(2, 2), random_vector(3, 1)), DimensionError);
}

TEST_CASE("every splitting method solves A = I in one step from zero") {
    const ComplexVector b = random_vector(6, 3);
    const SplitSystem<double> sys(ComplexMatrix::Identity(6, 6), b);
    for (auto m : {Method::RI, Method::JI, Method::GS, Method::SSOR}) {
        auto s = si_step(IterState<double>::start(sys, ComplexVector::Zero(6)), sys, m);
        CHECK((s.x - b).cwiseAbs().maxCoeff() == 0.0);
        CHECK(s.g.norm() == 0.0);
        CHECK(s.t == 1);
    }
}

TEST_CASE("si_step matches dense preconditioner oracles") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto sys = random_system(4, seed);
        const ComplexVector x0 = random_vector(4, seed + 90);
        const auto start = IterState<double>::start(sys, x0);
        const ComplexMatrix d = sys.d().cast<std::complex<double>>().asDiagonal();
        const ComplexMatrix dl = d + sys.l();

        const ComplexVector ji = x0 - start.g.cwiseQuotient(sys.d().cast<std::complex<double>>());
        CHECK((si_step(start, sys, Method::JI).x - ji).norm() <= 1e-10 * ji.norm());

        const ComplexVector gs = x0 - forward_subst(dl, start.g);
        CHECK((si_step(start, sys, Method::GS).x - gs).norm() <= 1e-10 * gs.norm());

        const ComplexVector mid = d * forward_subst(dl, start.g);
        const ComplexVector ssor = x0 - back_subst(dl.adjoint(), mid);
        CHECK((si_step(start, sys, Method::SSOR).x - ssor).norm() <= 1e-10 * ssor.norm());

        // Same SSOR step through an explicitly assembled M and a dense LU solve.
        const ComplexMatrix m = dl * d.inverse() * dl.adjoint();
        const ComplexVector ssor_dense = x0 - m.partialPivLu().solve(start.g);
        CHECK((ssor - ssor_dense).norm() <= 1e-10 * ssor.norm());

        const ComplexVector ri = x0 - start.g;
        CHECK((si_step(start, sys, Method::RI).x - ri).norm() <= 1e-12 * ri.norm());
    }
}

TEST_CASE("SSOR on a unit-diagonal system uses M = (I + L)(I + L)^H") {
    ComplexMatrix a = random_hpd(5, 4);
    const RealVector s = a.diagonal().real().cwiseSqrt().cwiseInverse();
    a = s.cast<std::complex<double>>().asDiagonal() * a * s.cast<std::complex<double>>().asDiagonal();
    for (Eigen::Index i = 0; i < 5; ++i) a(i, i) = 1.0;
    const SplitSystem<double> sys(a, random_vector(5, 6));
    const ComplexMatrix il = ComplexMatrix::Identity(5, 5) + sys.l();
    const ComplexMatrix m = il * il.adjoint();
    const ComplexVector g = random_vector(5, 7);
    const ComplexVector want = m.partialPivLu().solve(g);
    CHECK((apply_preconditioner_inverse(sys, Method::SSOR, g) - want).norm() <= 1e-12 * want.norm());
}

TEST_CASE("singular preconditioners are rejected") {
    ComplexMatrix a = ComplexMatrix::Identity(2, 2);
    a(1, 1) = 1e-20;
    const SplitSystem<double> sys(a, random_vector(2, 1));
    const auto start = IterState<double>::start(sys, ComplexVector::Zero(2));
    CHECK_THROWS_AS(si_step(start, sys, Method::JI), SingularPreconditionerError);
    CHECK_THROWS_AS(si_step(start, sys, Method::GS), SingularPreconditionerError);
    CHECK_THROWS_AS(si_step(start, sys, Method::SSOR), SingularPreconditionerError);
    CHECK_NOTHROW(si_step(start, sys, Method::RI));
    CHECK_THROWS_AS(si_step(start, sys, Method::LBFGS), ConfigError);
}

TEST_CASE("lbfgs_step") {
    SUBCASE("A = I converges in one step") {
        const ComplexVector b = random_vector(5, 1);
        const SplitSystem<double> sys(ComplexMatrix::Identity(5, 5), b);
        for (bool identity : {false, true}) {
            const auto s = lbfgs_step(IterState<double>::start(sys, ComplexVector::Zero(5)), sys, identity);
            CHECK((s.x - b).norm() <= 1e-15);
        }
    }
    SUBCASE("objective never increases on random 8x8 systems") {
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            const auto sys = random_system(8, seed);
            for (bool identity : {false, true}) {
                auto s = IterState<double>::start(sys, ComplexVector::Zero(8));
                double q = objective(sys, s.x);
                for (int t = 0; t < 30; ++t) {
                    s = lbfgs_step(std::move(s), sys, identity);
                    const double next = objective(sys, s.x);
                    CHECK(next <= q + 1e-12 * std::abs(q));
                    q = next;
                    const double tol = 1e-10 * (sys.a().norm() * s.x.norm() + sys.b().norm());
                    CHECK((s.g - (sys.a() * s.x - sys.b())).norm() <= tol);
                }
            }
        }
    }
    SUBCASE("2x2 systems reach the closed-form solution") {
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            const ComplexMatrix a = random_hpd(2, seed);
            const ComplexVector b = random_vector(2, seed + 30);
            const std::complex<double> det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
            ComplexVector exact(2);
            exact << (a(1, 1) * b(0) - a(0, 1) * b(1)) / det, (a(0, 0) * b(1) - a(1, 0) * b(0)) / det;
            const SplitSystem<double> sys(a, b);
            auto s = IterState<double>::start(sys, ComplexVector::Zero(2));
            for (int t = 0; t < 10; ++t) s = lbfgs_step(std::move(s), sys, false);
            CHECK((s.x - exact).norm() <= 1e-8);
        }
    }
    SUBCASE("indefinite input breaks down") {
        ComplexMatrix a(2, 2);
        a << 1.0, 2.0, 2.0, 1.0;
        ComplexVector b(2);
        b << 1.0, -1.0;
        const SplitSystem<double> sys(a, b);
        CHECK_THROWS_AS(lbfgs_step(IterState<double>::start(sys, ComplexVector::Zero(2)), sys, false), BreakdownError);
    }
}

TEST_CASE("run_detector") {
    SUBCASE("single RI step on A = I") {
        const ComplexVector b = random_vector(3, 2);
        const SplitSystem<double> sys(ComplexMatrix::Identity(3, 3), b);
        DetectorSpec spec;
        spec.method = Method::RI;
        spec.max_iters = 1;
        const auto traj = run_detector(spec, sys);
        REQUIRE(traj.iterates.size() == 1);
        CHECK((traj.iterates[0] - b).norm() == 0.0);
        CHECK_FALSE(traj.diverged);
    }
    SUBCASE("GS converges to the direct solution") {
        const SplitSystem<double> sys(random_hpd(12, 40, 4.0), random_vector(12, 540));
        const ComplexVector exact = pseudo_inverse_solve(sys.a(), sys.b());
        REQUIRE(iteration_matrix_radius(sys, Method::GS) < 1.0);
        DetectorSpec spec;
        spec.method = Method::GS;
        spec.max_iters = 200;
        const auto traj = run_detector(spec, sys, std::optional<ComplexVector>(exact));
        REQUIRE(traj.error_norms.size() == 200);
        CHECK(traj.error_norms.back() < 1e-6 * exact.norm());
        // Decreasing trend over blocks of 20 iterations, down to the rounding floor.
        for (std::size_t t = 20; t < 200; t += 20)
            CHECK(traj.error_norms[t] < std::max(traj.error_norms[t - 20], 1e-12 * exact.norm()));
    }
    SUBCASE("matched-filter start begins at b") {
        const auto sys = random_system(4, 41);
        DetectorSpec spec;
        spec.method = Method::RI;
        spec.max_iters = 1;
        spec.x0 = InitPolicy::MatchedFilter;
        const auto traj = run_detector(spec, sys);
        const ComplexVector want = sys.b() - (sys.a() * sys.b() - sys.b());
        CHECK((traj.iterates[0] - want).norm() <= 1e-12 * want.norm());
    }
    SUBCASE("plain JI diverges on an ELAA Gram matrix") {
        const auto ch = gen_elaa(GeometryConfig{}, FadingConfig{}, 11);
        const SplitSystem<double> sys(ComplexMatrix(ch.h.adjoint() * ch.h), ComplexVector(ch.h.adjoint() * ch.h.col(0)));
        REQUIRE(iteration_matrix_radius(sys, Method::JI) > 1.0);
        DetectorSpec spec;
        spec.method = Method::JI;
        spec.max_iters = 2000;
        const auto traj = run_detector(spec, sys);
        CHECK(traj.diverged);
        CHECK(traj.iterates.size() < 2000);
    }
    SUBCASE("rejects a non-positive budget") {
        DetectorSpec spec;
        spec.max_iters = 0;
        CHECK_THROWS_AS(run_detector(spec, random_system(2, 1)), ConfigError);
    }
}

TEST_CASE("iteration_matrix_radius") {
    const SplitSystem<double> id(ComplexMatrix::Identity(4, 4), random_vector(4, 1));
    for (auto m : {Method::RI, Method::JI, Method::GS, Method::SSOR}) CHECK(iteration_matrix_radius(id, m) <= 1e-15);
    ComplexMatrix d = ComplexMatrix::Zero(2, 2);
    d(0, 0) = 1.0;
    d(1, 1) = 2.0;
    CHECK(iteration_matrix_radius(SplitSystem<double>(d, random_vector(2, 1)), Method::JI) <= 1e-15);
    CHECK_THROWS_AS(iteration_matrix_radius(id, Method::LBFGS), ConfigError);

    SUBCASE("radius predicts convergence or divergence") {
        int below = 0, above = 0;
        for (std::uint64_t seed = 1; seed <= 30; ++seed) {
            const auto sys = random_system(6, seed);
            for (auto m : {Method::RI, Method::JI}) {
                const double rho = iteration_matrix_radius(sys, m);
                if (std::abs(rho - 1.0) < 0.05) continue;
                DetectorSpec spec;
                spec.method = m;
                spec.max_iters = 3000;
                const auto traj = run_detector(spec, sys);
                if (rho < 1.0) {
                    ++below;
                    CHECK_FALSE(traj.diverged);
                    CHECK(traj.residual_norms.back() < 1e-6 * sys.b().norm());
                } else {
                    ++above;
                    CHECK(traj.diverged);
                }
            }
        }
        CHECK(below > 0);
        CHECK(above > 0);
    }
}

TEST_CASE("GS and SSOR contract on random Hermitian positive definite systems") {
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const auto sys = random_system(8, seed * 7);
        CHECK(iteration_matrix_radius(sys, Method::GS) < 1.0);
        CHECK(iteration_matrix_radius(sys, Method::SSOR) < 1.0);
    }
}

TEST_CASE("parse_method") {
    CHECK(parse_method("ssor") == Method::SSOR);
    CHECK(parse_method("L-BFGS") == Method::LBFGS);
    CHECK(parse_method("Ji") == Method::JI);
    CHECK_THROWS_AS(parse_method("cg"), ConfigError);
}
