#include "doctest.h"

#include <cmath>

#include "bubbly/errors.hpp"
#include "bubbly/mie.hpp"

using namespace bubbly;

namespace {

Complex fd_residual(const BallSeriesSolution& s, const Vec3& x, Complex V, double step) {
    Complex lap = -6.0 * s(x);
    for (int a = 0; a < 3; ++a) {
        Vec3 e = Vec3::Zero();
        e[a] = step;
        lap += s(x + e) + s(x - e);
    }
    const Complex local = x.norm() < s.radius() ? V : Complex(0.0);
    return lap / (step * step) + (s.k() * s.k() - local) * s(x);
}

} // namespace

TEST_CASE("zero potential is the plane wave") {
    const auto s = mie_ball_solution(1.0, 0.0, Wavenumber(1.0), 14);
    for (const auto& b : s.scattered_coefficients()) CHECK(std::abs(b) < 1e-15);
    for (const Vec3& x : {Vec3(0.1, 0.2, 0.3), Vec3(0.0, 0.0, -0.99), Vec3(1.5, -2.0, 0.7)})
        CHECK(std::abs(s(x) - std::exp(Complex(0.0, x.z()))) < 1e-12);
}

TEST_CASE("interior wavenumbers") {
    CHECK(interior_wavenumber(1.0, -6.0).real() == doctest::Approx(std::sqrt(7.0)));
    CHECK(interior_wavenumber(1.0, -6.0).imag() == doctest::Approx(0.0));
    CHECK(interior_wavenumber(1.0, 6.0).imag() == doctest::Approx(std::sqrt(5.0)));
    CHECK(std::abs(interior_wavenumber(1.0, 6.0).real()) < 1e-15);
    CHECK(interior_wavenumber(1.0, Complex(2.0, -3.0)).imag() >= 0.0);
}

TEST_CASE("high-index ball satisfies the PDE and the matching conditions") {
    const Complex V = -6.0;
    const auto s = mie_ball_solution(1.0, V, Wavenumber(1.0), default_l_max(1.0, 1.0));
    CHECK(s.k_in().real() == doctest::Approx(std::sqrt(7.0)));
    CHECK(s.continuity_residual() < 1e-12);
    for (const Vec3& x : {Vec3(0.2, 0.1, -0.3), Vec3(-0.4, 0.3, 0.5), Vec3(1.4, 0.2, 0.1), Vec3(0.0, -1.2, 1.0)}) {
        const Complex r1 = fd_residual(s, x, V, 4e-3);
        const Complex r2 = fd_residual(s, x, V, 2e-3);
        CHECK(std::abs(r2) < 1e-3);
        CHECK(std::abs(r2) < 0.35 * std::abs(r1) + 1e-7);
    }
    // Value and radial derivative continuous across r = R.
    for (const Vec3& dir : {Vec3(0.0, 0.0, 1.0), Vec3(0.6, 0.0, 0.8), Vec3(0.0, 0.8, -0.6)}) {
        const double e = 1e-6;
        const Complex in = s((1.0 - e) * dir), out = s((1.0 + e) * dir);
        CHECK(std::abs(in - out) < 1e-5);
        const Complex din = (s((1.0 - e) * dir) - s((1.0 - 3 * e) * dir)) / (2 * e);
        const Complex dout = (s((1.0 + 3 * e) * dir) - s((1.0 + e) * dir)) / (2 * e);
        CHECK(std::abs(din - dout) < 1e-4 * std::max(1.0, std::abs(din)));
    }
}

TEST_CASE("interior oscillates faster than the exterior") {
    const auto s = mie_ball_solution(1.0, -6.0, Wavenumber(1.0), 14);
    // Count sign changes of Re psi along the z axis inside and over an equal length outside.
    auto sign_changes = [&](double a, double b) {
        int n = 0;
        double prev = s(Vec3(0.0, 0.0, a)).real();
        for (int i = 1; i <= 2000; ++i) {
            const double v = s(Vec3(0.0, 0.0, a + (b - a) * i / 2000.0)).real();
            if ((v > 0) != (prev > 0)) ++n;
            prev = v;
        }
        return n;
    };
    CHECK(sign_changes(-0.99, 0.99) >= sign_changes(1.01, 2.99));
}

TEST_CASE("dissipative ball decays inward") {
    const auto s = mie_ball_solution(1.0, 6.0, Wavenumber(1.0), 14);
    CHECK(s.k_in().imag() == doctest::Approx(std::sqrt(5.0)));
    const double centre = std::abs(s(Vec3::Zero()));
    double surface = 0.0;
    for (int i = 0; i < 40; ++i) {
        const double th = kPi * (i + 0.5) / 40;
        surface = std::max(surface, std::abs(s(Vec3(std::sin(th), 0.0, std::cos(th)))));
    }
    CHECK(centre < surface);
    CHECK(centre < 0.5 * surface);
}

TEST_CASE("truncation is validated") {
    CHECK_THROWS_AS(mie_ball_solution(1.0, -6.0, Wavenumber(1.0), 5), PreconditionError);
    CHECK_THROWS_AS(mie_ball_solution(-1.0, -6.0, Wavenumber(1.0), 20), PreconditionError);
    CHECK_THROWS_AS(mie_ball_solution(1.0, -6.0, Wavenumber(0.0), 20), PreconditionError);
    // k_in = 50 keeps large surface amplitudes well past l = 11.
    CHECK_THROWS_AS(mie_ball_solution(1.0, -2499.0, Wavenumber(1.0), 11), TruncationError);
}
