#include "doctest.h"

#include <cmath>

#include "bubbly/errors.hpp"
#include "bubbly/foldy.hpp"
#include "bubbly/greens.hpp"
#include "bubbly/physics.hpp"

using namespace bubbly;

namespace {

const Domain unit_ball = Domain::ball(Vec3::Zero(), 1.0);

ScalingRegime regime_for(long N, double beta0 = -1.0) {
    return derive_regime({N, 1.0, {0.3, 0.4, 0.25}, 2.0, beta0, 1.0, 1.0, ShapeConstants::unit_ball()});
}

PointConfiguration first_points(const PointConfiguration& full, std::size_t n) {
    std::vector<Vec3> pts(full.centers().begin(), full.centers().begin() + static_cast<long>(n));
    return PointConfiguration(std::move(pts), full.domain());
}

// Dense I - T built entry by entry from the Green function, independent of the library assembly.
Eigen::MatrixXcd reference_system(const PointConfiguration& cfg, Complex g, double k) {
    const auto N = static_cast<Eigen::Index>(cfg.size());
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Identity(N, N);
    for (Eigen::Index i = 0; i < N; ++i)
        for (Eigen::Index j = 0; j < N; ++j)
            if (i != j) {
                const double r = (cfg.centers()[i] - cfg.centers()[j]).norm();
                A(i, j) -= g * (-std::exp(Complex(0.0, k * r)) / (4.0 * kPi * r));
            }
    return A;
}

} // namespace

TEST_CASE("right-hand side") {
    const PlaneWave u(Vec3::UnitZ(), Wavenumber(1.0));
    const PointConfiguration one({Vec3::Zero()}, unit_ball);
    CHECK(assemble_rhs(one, u)[0] == Complex(1.0, 0.0));
    const auto cfg = generate_periodic(unit_ball, 8);
    const auto b = assemble_rhs(cfg, u);
    for (Eigen::Index j = 0; j < b.size(); ++j) CHECK(std::abs(b[j]) == doctest::Approx(1.0));
    const auto z = assemble_rhs(cfg, [](const Vec3&) { return Complex(0.0); });
    CHECK(z.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("interaction operator") {
    const Complex g(-0.05, 0.001);
    const Wavenumber k(1.0);
    const PointConfiguration one({Vec3::Zero()}, unit_ball);
    ComplexVector x1(1);
    x1 << Complex(3.0, 1.0);
    CHECK(apply_T(one, g, k, x1)[0] == Complex(0.0));

    const auto cfg = generate_periodic(unit_ball, 6);
    const auto N = static_cast<Eigen::Index>(cfg.size());
    for (Eigen::Index i : {Eigen::Index{0}, N / 2, N - 1}) {
        ComplexVector e = ComplexVector::Zero(N);
        e[i] = 1.0;
        const auto col = apply_T(cfg, g, k, e);
        for (Eigen::Index j = 0; j < N; ++j) {
            const Complex expected = j == i ? Complex(0.0) : g * green(cfg.centers()[j], cfg.centers()[i], k);
            CHECK(std::abs(col[j] - expected) <= 1e-15 * (1.0 + std::abs(expected)));
        }
        ComplexVector ej = ComplexVector::Zero(N);
        ej[N / 3] = 1.0;
        CHECK(std::abs(col[N / 3] - apply_T(cfg, g, k, ej)[i]) <= 1e-16);
    }
    const Eigen::MatrixXcd A = assemble_system(cfg, g, k);
    CHECK((A - reference_system(cfg, g, 1.0)).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("single bubble") {
    const PointConfiguration one({Vec3(0.2, 0.1, 0.0)}, unit_ball);
    const auto r = regime_for(1);
    const PlaneWave u(Vec3::UnitZ(), Wavenumber(1.0));
    for (auto m : {FoldyMethod::direct, FoldyMethod::iterative}) {
        FoldyOptions opt;
        opt.method = m;
        const auto sol = solve_foldy(one, r, u, opt);
        CHECK(sol.x[0] == u(one.centers()[0]));
    }
}

TEST_CASE("two bubbles match the closed form") {
    const PointConfiguration two({Vec3(-0.15, 0.0, 0.0), Vec3(0.15, 0.0, 0.0)}, unit_ball);
    const auto r = regime_for(2);
    // Incidence along +z keeps u equal at both centers.
    const PlaneWave u(Vec3::UnitZ(), Wavenumber(1.0));
    const Complex b = u(two.centers()[0]);
    const double d = 0.3;
    const Complex t = r.g * (-std::exp(Complex(0.0, d)) / (4.0 * kPi * d));
    const Complex expected = b / (1.0 - t);
    for (auto m : {FoldyMethod::direct, FoldyMethod::iterative}) {
        FoldyOptions opt;
        opt.method = m;
        opt.tol = 1e-14;
        const auto sol = solve_foldy(two, r, u, opt);
        CHECK(std::abs(sol.x[0] - expected) <= 1e-12 * std::abs(expected));
        CHECK(std::abs(sol.x[1] - expected) <= 1e-12 * std::abs(expected));
    }
}

TEST_CASE("direct and iterative agree at N = 500") {
    const auto cfg = first_points(generate_periodic(unit_ball, 10), 500);
    const auto r = regime_for(500);
    const PlaneWave u(Vec3(0.0, 0.6, 0.8), Wavenumber(1.0));
    FoldyOptions d, it;
    d.method = FoldyMethod::direct;
    it.method = FoldyMethod::iterative;
    it.tol = 1e-13;
    const auto xd = solve_foldy(cfg, r, u, d);
    const auto xi = solve_foldy(cfg, r, u, it);
    CHECK(xd.method == FoldyMethod::direct);
    CHECK(xi.method == FoldyMethod::iterative);
    CHECK(xi.iterations > 0);
    CHECK((xd.x - xi.x).cwiseAbs().maxCoeff() <= 1e-10 * xd.x.cwiseAbs().maxCoeff());

    // Residuals re-verified with the independently assembled dense system.
    const auto b = assemble_rhs(cfg, u);
    const Eigen::MatrixXcd A = reference_system(cfg, r.g, 1.0);
    for (const auto* s : {&xd, &xi}) {
        const double res = (A * s->x - b).cwiseAbs().maxCoeff();
        CHECK(res <= 1e-10 * b.cwiseAbs().maxCoeff());
        CHECK(s->residual_inf == doctest::Approx(foldy_residual(cfg, r.g, Wavenumber(1.0), s->x, b)));
    }

    FoldyOptions a;
    CHECK(solve_foldy(cfg, r, u, a).method == FoldyMethod::direct);
}

TEST_CASE("solution is linear in the incident field") {
    const auto cfg = generate_periodic(unit_ball, 8);
    const auto r = regime_for(static_cast<long>(cfg.size()));
    const PlaneWave u1(Vec3::UnitZ(), Wavenumber(1.0)), u2(Vec3::UnitX(), Wavenumber(1.0));
    const auto combo = [&](const Vec3& x) { return 2.0 * u1(x) - Complex(0.0, 3.0) * u2(x); };
    FoldyOptions opt;
    opt.tol = 1e-13;
    const auto a = solve_foldy(cfg, r, u1, opt).x;
    const auto b = solve_foldy(cfg, r, u2, opt).x;
    const auto c = solve_foldy(cfg, r, combo, opt).x;
    CHECK((c - (2.0 * a - Complex(0.0, 3.0) * b)).cwiseAbs().maxCoeff() <= 1e-11 * c.cwiseAbs().maxCoeff());
}

TEST_CASE("near-singular system is reported") {
    const PointConfiguration two({Vec3(-0.15, 0.0, 0.0), Vec3(0.15, 0.0, 0.0)}, unit_ball);
    auto r = regime_for(2);
    // Coupling t = 1 makes I - T exactly singular.
    r.g = 1.0 / green(two.centers()[0], two.centers()[1], Wavenumber(1.0));
    FoldyOptions opt;
    opt.method = FoldyMethod::direct;
    const PlaneWave u(Vec3::UnitZ(), Wavenumber(1.0));
    CHECK_THROWS_AS(solve_foldy(two, r, u, opt), NearResonantSystemError);
}

TEST_CASE("iteration cap raises a convergence error") {
    const auto cfg = generate_periodic(unit_ball, 8);
    const auto r = regime_for(static_cast<long>(cfg.size()));
    FoldyOptions opt;
    opt.method = FoldyMethod::iterative;
    opt.tol = 1e-15;
    opt.max_iterations = 1;
    opt.restart = 1;
    const PlaneWave u(Vec3::UnitZ(), Wavenumber(1.0));
    CHECK_THROWS_AS(solve_foldy(cfg, r, u, opt), ConvergenceError);
}

TEST_CASE("micro field") {
    const auto cfg = generate_periodic(unit_ball, 8);
    const auto r = regime_for(static_cast<long>(cfg.size()));
    const PlaneWave u(Vec3::UnitZ(), Wavenumber(1.0));

    SUBCASE("zero amplitudes give the incident field") {
        FoldySolution zero;
        zero.x = ComplexVector::Zero(static_cast<Eigen::Index>(cfg.size()));
        const Vec3 x(0.33, -0.21, 0.05);
        CHECK(micro_field(cfg, r, zero, u, x).value == u(x));
    }
    SUBCASE("closure: amplitudes equal the field minus the self term") {
        const auto sol = solve_foldy(cfg, r, u);
        for (std::size_t j = 0; j < cfg.size(); j += 17) {
            Complex others = u(cfg.centers()[j]);
            for (std::size_t i = 0; i < cfg.size(); ++i)
                if (i != j) others += r.g * green(cfg.centers()[j], cfg.centers()[i], Wavenumber(1.0)) *
                                      sol.x[static_cast<Eigen::Index>(i)];
            CHECK(std::abs(others - sol.x[static_cast<Eigen::Index>(j)]) <= 1e-10);
            // Approaching the center, field minus the singular self term tends to x_j.
            const Vec3 near = cfg.centers()[j] + Vec3(1e-7, 0.0, 0.0);
            const Complex w = micro_field(cfg, r, sol, u, near).value -
                              r.g * green(near, cfg.centers()[j], Wavenumber(1.0)) *
                                  sol.x[static_cast<Eigen::Index>(j)];
            CHECK(std::abs(w - sol.x[static_cast<Eigen::Index>(j)]) <= 1e-5);
        }
    }
    SUBCASE("far field decays like 1/r") {
        const auto sol = solve_foldy(cfg, r, u);
        const Vec3 dir = Vec3(1.0, 2.0, 2.0) / 3.0;
        std::vector<double> scaled;
        for (double R : {10.0, 100.0, 1000.0}) {
            const Vec3 x = R * dir;
            scaled.push_back(R * std::abs(micro_field(cfg, r, sol, u, x).value - u(x)));
        }
        CHECK(scaled[1] == doctest::Approx(scaled[2]).epsilon(0.05));
        CHECK(scaled[0] == doctest::Approx(scaled[2]).epsilon(0.5));
    }
    SUBCASE("evaluation at a center is singular") {
        const auto sol = solve_foldy(cfg, r, u);
        CHECK_THROWS_AS(micro_field(cfg, r, sol, u, cfg.centers()[3]), SingularEvaluationError);
    }
}

TEST_CASE("exclusion mask") {
    const auto cfg = generate_periodic(unit_ball, 8);
    const std::size_t N = cfg.size();
    const double e2 = 0.25;
    const double rad = exclusion_radius(N, e2);
    CHECK(rad == doctest::Approx(std::pow(static_cast<double>(N), -0.75)));
    // The ball lattice always holds the origin; offsets from it are exact, and the spacing
    // is far larger than rad, so no other center interferes.
    const Vec3 c = Vec3::Zero();
    const std::vector<Vec3> pts{c + Vec3(0.5 * rad, 0.0, 0.0), Vec3(10.0, 10.0, 10.0), c,
                                c + Vec3(0.0, rad, 0.0), c + Vec3(0.0, 0.0, std::nextafter(rad, 0.0))};
    const auto m = exclusion_mask(cfg, e2, pts);
    CHECK(m[0]);
    CHECK_FALSE(m[1]);
    CHECK(m[2]);
    CHECK_FALSE(m[3]);
    CHECK(m[4]);
}

TEST_CASE("method names") {
    CHECK(to_string(FoldyMethod::automatic) == "auto");
    CHECK(foldy_method_from_string("direct") == FoldyMethod::direct);
    CHECK(foldy_method_from_string("iterative") == FoldyMethod::iterative);
    CHECK_THROWS_AS(foldy_method_from_string("lu"), PreconditionError);
}
