#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "bubbly/effective.hpp"
#include "bubbly/errors.hpp"
#include "bubbly/greens.hpp"
#include "bubbly/mie.hpp"

using namespace bubbly;

namespace {

const Domain unit_ball = Domain::ball(Vec3::Zero(), 1.0);

RealField ball_potential(double V) {
    return [V](const Vec3& x) { return unit_ball.contains(x) ? V : 0.0; };
}

double rel_linf_vs_series(const GridField& f, const BallSeriesSolution& ref) {
    double num = 0.0, den = 0.0;
    const int m = f.grid.m();
    for (int k = 0; k < m; ++k)
        for (int j = 0; j < m; ++j)
            for (int i = 0; i < m; ++i) {
                const Vec3 c = f.grid.center(i, j, k);
                if (c.norm() >= 0.8) continue;
                const Complex r = ref(c);
                num = std::max(num, std::abs(f.at(i, j, k) - r));
                den = std::max(den, std::abs(r));
            }
    return num / den;
}

} // namespace

TEST_CASE("voxel grid covers the bounding cube") {
    const VoxelGrid g(unit_ball, 20);
    CHECK(g.h() == doctest::Approx(0.1));
    CHECK(g.lo().x() == doctest::Approx(-1.0));
    CHECK(g.center(0, 0, 0).x() == doctest::Approx(-0.95));
    CHECK(g.index(1, 0, 0) == 1);
    CHECK(g.index(0, 1, 0) == 20);
    CHECK((g.center(g.index(3, 4, 5)) - g.center(3, 4, 5)).norm() == 0.0);
}

TEST_CASE("cell kernel") {
    const double h = 0.05, k = 1.3;
    const double a = equal_volume_radius(h);
    CHECK(4.0 * kPi * a * a * a / 3.0 == doctest::Approx(h * h * h));
    // Far cells reduce to the midpoint rule.
    CHECK(std::abs(cell_kernel(3.0 * h, k, h) - h * h * h * green_radial(3.0 * h, k)) < 1e-18);
    // Continuous across the equal-volume radius.
    CHECK(std::abs(cell_kernel(a * (1 + 1e-9), k, h) - cell_kernel(a * (1 - 1e-9), k, h)) <
          1e-8 * std::abs(cell_kernel(a, k, h)));
    const Complex self = cell_kernel(0.0, k, h);
    CHECK(self.real() == doctest::Approx(-a * a / 2.0).epsilon(1e-12));
    CHECK(self.imag() == doctest::Approx(-k * h * h * h / (4.0 * kPi)).epsilon(1e-12));
    // The equal-volume ball stands in for the cube: compare with a fine midpoint sum over the cube.
    const int n = 60;
    double cube = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int l = 0; l < n; ++l) {
                const Vec3 p = h * (Vec3(i + 0.5, j + 0.5, l + 0.5) / n - Vec3::Constant(0.5));
                cube += -1.0 / (4.0 * kPi * p.norm());
            }
    cube *= std::pow(h / n, 3);
    CHECK(self.real() == doctest::Approx(cube).epsilon(3e-2));
}

TEST_CASE("volume potential of a uniform ball") {
    const VoxelGrid g(unit_ball, 40);
    std::vector<Complex> rho(g.size(), 0.0);
    for (std::size_t q = 0; q < g.size(); ++q) rho[q] = unit_ball.contains(g.center(q)) ? 1.0 : 0.0;
    const std::vector<Vec3> pts{Vec3::Zero(), Vec3(0.3, 0.2, -0.1), Vec3(0.0, 0.0, 2.0), Vec3(1.7, 1.1, 0.4)};
    const auto vals = volume_potential(g, rho, 0.0, pts);
    for (std::size_t p = 0; p < pts.size(); ++p) {
        const double r = pts[p].norm();
        const double exact = r < 1.0 ? -(0.5 - r * r / 6.0) : -1.0 / (3.0 * r);
        CHECK(vals[p].real() == doctest::Approx(exact).epsilon(2e-2));
    }
}

TEST_CASE("zero potential returns the incident field") {
    const PlaneWave u(Vec3::UnitZ(), Wavenumber(1.0));
    const auto f = ls_solve(unit_ball, [](const Vec3&) { return 0.0; }, u, Wavenumber(1.0), 16);
    for (std::size_t q = 0; q < f.grid.size(); ++q) CHECK(f.values[q] == u(f.grid.center(q)));
    const Vec3 x(0.123, -0.4, 0.77);
    CHECK(ls_evaluate(f, x, u) == u(x));
}

TEST_CASE("grid resolution below 16 is rejected") {
    const PlaneWave u(Vec3::UnitZ(), Wavenumber(1.0));
    CHECK_THROWS_AS(ls_solve(unit_ball, ball_potential(-6.0), u, Wavenumber(1.0), 8), PreconditionError);
}

TEST_CASE("constant-potential ball converges to the series solution") {
    const PlaneWave u(Vec3::UnitZ(), Wavenumber(1.0));
    const auto ref = mie_ball_solution(1.0, -6.0, Wavenumber(1.0), 20);
    double prev = INFINITY;
    for (int m : {16, 32, 48}) {
        const auto f = ls_solve(unit_ball, ball_potential(-6.0), u, Wavenumber(1.0), m);
        CHECK(f.relative_residual <= 1e-8);
        const double err = rel_linf_vs_series(f, ref);
        CHECK(err < prev);
        prev = err;
        if (m == 48) {
            CHECK(err <= 0.05);
            // Representation evaluated at voxel centers reproduces the grid values.
            double worst = 0.0, inf = 0.0;
            std::vector<Vec3> pts;
            std::vector<Complex> grid_vals;
            for (int q = 0; q < 200; ++q) {
                const int i = (q * 7) % m, j = (q * 13) % m, k = (q * 29) % m;
                pts.push_back(f.grid.center(i, j, k));
                grid_vals.push_back(f.at(i, j, k));
            }
            const auto w = ls_evaluate(f, pts, u);
            for (const auto& v : f.values) inf = std::max(inf, std::abs(v));
            for (std::size_t q = 0; q < pts.size(); ++q) worst = std::max(worst, std::abs(w[q] - grid_vals[q]));
            CHECK(worst <= 5.0 * 1e-8 * inf);
        }
    }
}

TEST_CASE("linear in the incident field") {
    const PlaneWave u(Vec3::UnitX(), Wavenumber(1.0));
    const auto twice = [&](const Vec3& x) { return 2.0 * u(x); };
    LsOptions opt;
    opt.tol = 1e-11;
    const auto a = ls_solve(unit_ball, ball_potential(-6.0), u, Wavenumber(1.0), 20, opt);
    const auto b = ls_solve(unit_ball, ball_potential(-6.0), twice, Wavenumber(1.0), 20, opt);
    double worst = 0.0, inf = 0.0;
    for (std::size_t q = 0; q < a.values.size(); ++q) {
        worst = std::max(worst, std::abs(b.values[q] - 2.0 * a.values[q]));
        inf = std::max(inf, std::abs(b.values[q]));
    }
    CHECK(worst <= 1e-9 * inf);
}

TEST_CASE("far field of the representation decays like 1/r") {
    const PlaneWave u(Vec3::UnitZ(), Wavenumber(1.0));
    const auto f = ls_solve(unit_ball, ball_potential(-6.0), u, Wavenumber(1.0), 20);
    const Vec3 dir = Vec3(2.0, -1.0, 2.0) / 3.0;
    const double s10 = 10.0 * std::abs(ls_evaluate(f, 10.0 * dir, u) - u(10.0 * dir));
    const double s100 = 100.0 * std::abs(ls_evaluate(f, 100.0 * dir, u) - u(100.0 * dir));
    CHECK(s10 == doctest::Approx(s100).epsilon(0.15));
}

TEST_CASE("finite-difference residual") {
    SUBCASE("plane wave is second-order accurate") {
        const PlaneWave u(Vec3(0.0, 0.6, 0.8), Wavenumber(1.0));
        const auto zero = [](const Vec3&) { return 0.0; };
        const auto r24 = pde_residual(GridField::sample(unit_ball, 24, 1.0, u, zero));
        const auto r48 = pde_residual(GridField::sample(unit_ball, 48, 1.0, u, zero));
        CHECK(r48.interior <= 1e-2);
        CHECK(r24.interior / r48.interior == doctest::Approx(4.0).epsilon(0.1));
        CHECK(r48.interface_count == 0);
    }
    SUBCASE("constant field with k = 0") {
        const auto one = [](const Vec3&) { return Complex(1.0); };
        const auto r = pde_residual(GridField::sample(unit_ball, 20, 0.0, one, [](const Vec3&) { return 0.0; }));
        CHECK(r.interior == 0.0);
    }
    SUBCASE("series solution separates interior from interface voxels") {
        const auto ref = mie_ball_solution(1.0, -6.0, Wavenumber(1.0), 20);
        const auto psi = [&](const Vec3& x) { return ref(x); };
        const auto r = pde_residual(GridField::sample(unit_ball, 48, 1.0, psi, ball_potential(-6.0)));
        CHECK(r.interface_count > 0);
        CHECK(r.interior_count > 0);
        CHECK(r.interior < 0.05);
        CHECK(r.interface > r.interior);
    }
    SUBCASE("grid solve satisfies the PDE deep inside the ball") {
        // Independent stencil restricted to |x| < 0.6, clear of the staircase interface.
        const PlaneWave u(Vec3::UnitZ(), Wavenumber(1.0));
        auto deep_residual = [&](int m) {
            const auto f = ls_solve(unit_ball, ball_potential(-6.0), u, Wavenumber(1.0), m);
            const double h = f.grid.h();
            double worst = 0.0, inf = 0.0;
            for (const auto& v : f.values) inf = std::max(inf, std::abs(v));
            for (int k = 1; k < m - 1; ++k)
                for (int j = 1; j < m - 1; ++j)
                    for (int i = 1; i < m - 1; ++i) {
                        if (f.grid.center(i, j, k).norm() >= 0.6) continue;
                        const Complex lap = (f.at(i + 1, j, k) + f.at(i - 1, j, k) + f.at(i, j + 1, k) +
                                             f.at(i, j - 1, k) + f.at(i, j, k + 1) + f.at(i, j, k - 1) -
                                             6.0 * f.at(i, j, k)) /
                                            (h * h);
                        worst = std::max(worst, std::abs(lap + (1.0 + 6.0) * f.at(i, j, k)));
                    }
            return worst / inf;
        };
        const double r24 = deep_residual(24), r48 = deep_residual(48);
        MESSAGE("deep residual m=24: " << r24 << ", m=48: " << r48);
        CHECK(r24 / r48 > 3.0);
    }
}
