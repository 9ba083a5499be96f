#pragma once

#include "bubbly/types.hpp"

namespace bubbly {

/// Outgoing Helmholtz Green function G(x,y,k) = -exp(ik|x-y|) / (4 pi |x-y|).
///
/// With this sign (Delta + k^2) G = +delta. Throws SingularEvaluationError at x == y.
Complex green(const Vec3& x, const Vec3& y, Wavenumber k);

/// Same kernel as a function of distance r > 0.
Complex green_radial(double r, double k);

/// Mollified Laplace kernel: -1/(4 pi r) for r >= r_N, -r/(4 pi r_N^2) below.
double mollified_green(double r, double r_N);

/// Plane wave exp(i k d.x) with unit direction d.
class PlaneWave {
  public:
    PlaneWave(const Vec3& direction, Wavenumber k);

    Complex operator()(const Vec3& x) const;

    const Vec3& direction() const noexcept { return direction_; }
    double wavenumber() const noexcept { return k_; }

  private:
    Vec3 direction_;
    double k_;
};

PlaneWave plane_wave(const Vec3& direction, Wavenumber k);

} // namespace bubbly
