#pragma once

#include <vector>

#include "bubbly/types.hpp"

namespace bubbly {

/// Series solution of (Delta + k^2 - V) psi = 0 for a ball of constant V under e^{ikz} incidence.
///
/// Inside r < R: psi = sum_l c_l j_l(k_in r) P_l(cos theta).
/// Outside: psi = e^{ikz} + sum_l b_l h_l(kr) P_l(cos theta).
/// theta is measured from the incidence direction +z about the ball centre (origin).
class BallSeriesSolution {
  public:
    BallSeriesSolution(double R, Complex V, double k, int l_max);

    double radius() const noexcept { return R_; }
    double k() const noexcept { return k_; }
    Complex k_in() const noexcept { return k_in_; }
    Complex potential() const noexcept { return V_; }
    int l_max() const noexcept { return l_max_; }
    const std::vector<Complex>& interior_coefficients() const noexcept { return c_; }
    const std::vector<Complex>& scattered_coefficients() const noexcept { return b_; }

    Complex operator()(const Vec3& x) const;
    std::vector<Complex> evaluate(const std::vector<Vec3>& points) const;

    /// Worst relative mismatch of value and radial derivative across r = R over all modes.
    double continuity_residual() const;

  private:
    double R_;
    Complex V_;
    double k_;
    Complex k_in_;
    int l_max_;
    std::vector<Complex> c_;
    std::vector<Complex> b_;
};

/// Principal interior wavenumber sqrt(k^2 - V) with Im >= 0.
Complex interior_wavenumber(double k, Complex V);

/// Default truncation ceil(kR) + 12.
int default_l_max(double k, double R);

/// Builds the series solution. Requires l_max >= kR + 10, R > 0, k > 0.
///
/// Throws TruncationError when the last mode still carries more than 1e-12 of
/// the largest mode amplitude on the ball surface.
BallSeriesSolution mie_ball_solution(double R, Complex V, Wavenumber k, int l_max);

} // namespace bubbly
