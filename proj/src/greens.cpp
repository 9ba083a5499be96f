#include "bubbly/greens.hpp"

#include <cmath>

#include "bubbly/errors.hpp"

namespace bubbly {

Complex green_radial(double r, double k) {
    if (!(r > 0.0)) throw SingularEvaluationError("Green function evaluated at coincident points");
    const double scale = -1.0 / (4.0 * kPi * r);
    if (k == 0.0) return {scale, 0.0};
    return scale * Complex(std::cos(k * r), std::sin(k * r));
}

Complex green(const Vec3& x, const Vec3& y, Wavenumber k) {
    return green_radial((x - y).norm(), k.value());
}

double mollified_green(double r, double r_N) {
    if (!(r_N > 0.0)) throw PreconditionError("mollified_green: r_N must be positive");
    if (r < 0.0) throw PreconditionError("mollified_green: negative distance");
    if (r >= r_N) return -1.0 / (4.0 * kPi * r);
    return -r / (4.0 * kPi * r_N * r_N);
}

PlaneWave::PlaneWave(const Vec3& direction, Wavenumber k) : direction_(direction), k_(k.value()) {
    if (std::abs(direction.norm() - 1.0) > 1e-12)
        throw PreconditionError("plane wave direction must be a unit vector");
}

Complex PlaneWave::operator()(const Vec3& x) const {
    const double phase = k_ * direction_.dot(x);
    return {std::cos(phase), std::sin(phase)};
}

PlaneWave plane_wave(const Vec3& direction, Wavenumber k) { return PlaneWave(direction, k); }

} // namespace bubbly
