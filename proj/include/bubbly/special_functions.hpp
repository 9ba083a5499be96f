#pragma once

#include <vector>

#include "bubbly/types.hpp"

namespace bubbly {

/// Spherical Bessel functions j_0(z) .. j_lmax(z) for complex z.
///
/// Miller's downward recurrence normalized against the closed form of j_0
/// (or j_1 where j_0 nearly vanishes); the ascending series is used for |z| < 1e-3
/// where the normalization loses accuracy.
std::vector<Complex> sph_bessel_j(int lmax, Complex z);

/// Spherical Bessel functions of the second kind y_0(x) .. y_lmax(x), real x > 0, upward recurrence.
std::vector<double> sph_bessel_y(int lmax, double x);

/// Spherical Hankel functions h_l^(1)(x) = j_l(x) + i y_l(x) for real x > 0.
std::vector<Complex> sph_hankel1(int lmax, double x);

/// Derivatives from f_l' = f_{l-1} - (l+1)/z f_l, given f_0 .. f_{lmax+1}.
std::vector<Complex> sph_derivatives(const std::vector<Complex>& f, Complex z, int lmax);

/// Legendre polynomials P_0(x) .. P_lmax(x) by three-term recurrence.
std::vector<double> legendre(int lmax, double x);

} // namespace bubbly
