#pragma once

#include <complex>
#include <functional>
#include <stdexcept>

#include <Eigen/Core>

namespace bubbly {

using Complex = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using ComplexVector = Eigen::VectorXcd;

/// Complex scalar field evaluated at a point in space.
using ComplexField = std::function<Complex(const Vec3&)>;
/// Real scalar field evaluated at a point in space.
using RealField = std::function<double(const Vec3&)>;

/// Nonnegative exterior wavenumber k = omega * v.
class Wavenumber {
  public:
    explicit Wavenumber(double k) : k_(k) {
        if (!(k >= 0.0)) throw std::invalid_argument("wavenumber must be nonnegative");
    }
    double value() const noexcept { return k_; }
    operator double() const noexcept { return k_; }

  private:
    double k_;
};

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr Complex kI{0.0, 1.0};

} // namespace bubbly
