#include "bubbly/special_functions.hpp"

#include <cmath>

#include "bubbly/errors.hpp"

namespace bubbly {

namespace {

std::vector<Complex> series_j(int lmax, Complex z) {
    std::vector<Complex> out(lmax + 1);
    const Complex z2 = -0.5 * z * z;
    Complex zl = 1.0;
    double dfact = 1.0; // (2l+1)!!
    for (int l = 0; l <= lmax; ++l) {
        dfact *= (2 * l + 1);
        Complex term = zl / dfact;
        Complex sum = term;
        for (int n = 1; n < 30; ++n) {
            term *= z2 / (static_cast<double>(n) * (2 * l + 2 * n + 1));
            sum += term;
            if (std::abs(term) < 1e-17 * std::abs(sum)) break;
        }
        out[l] = sum;
        zl *= z;
    }
    return out;
}

} // namespace

std::vector<Complex> sph_bessel_j(int lmax, Complex z) {
    if (lmax < 0) throw PreconditionError("sph_bessel_j: lmax must be nonnegative");
    const double az = std::abs(z);
    if (az < 1e-3) return series_j(lmax, z);

    // Start well above both lmax and |z| so the minimal solution dominates.
    const int start = lmax + 20 + static_cast<int>(std::ceil(az + 3.0 * std::cbrt(az)));
    std::vector<Complex> f(start + 2, Complex(0.0));
    f[start + 1] = 0.0;
    f[start] = 1e-300;
    for (int l = start; l >= 1; --l) {
        f[l - 1] = static_cast<double>(2 * l + 1) / z * f[l] - f[l + 1];
        // Rescale to avoid overflow while descending.
        if (std::abs(f[l - 1]) > 1e250) {
            for (int q = l - 1; q <= start + 1; ++q) f[q] *= 1e-250;
        }
    }
    const Complex j0 = std::sin(z) / z;
    const Complex j1 = std::sin(z) / (z * z) - std::cos(z) / z;
    Complex scale;
    if (std::abs(j0) >= std::abs(j1)) {
        scale = j0 / f[0];
    } else {
        scale = j1 / f[1];
    }
    std::vector<Complex> out(lmax + 1);
    for (int l = 0; l <= lmax; ++l) out[l] = f[l] * scale;
    return out;
}

std::vector<double> sph_bessel_y(int lmax, double x) {
    if (!(x > 0.0)) throw PreconditionError("sph_bessel_y: argument must be positive");
    std::vector<double> y(lmax + 1);
    y[0] = -std::cos(x) / x;
    if (lmax >= 1) y[1] = -std::cos(x) / (x * x) - std::sin(x) / x;
    for (int l = 1; l < lmax; ++l) y[l + 1] = (2 * l + 1) / x * y[l] - y[l - 1];
    return y;
}

std::vector<Complex> sph_hankel1(int lmax, double x) {
    const auto j = sph_bessel_j(lmax, Complex(x, 0.0));
    const auto y = sph_bessel_y(lmax, x);
    std::vector<Complex> h(lmax + 1);
    for (int l = 0; l <= lmax; ++l) h[l] = Complex(j[l].real(), y[l]);
    return h;
}

std::vector<Complex> sph_derivatives(const std::vector<Complex>& f, Complex z, int lmax) {
    if (static_cast<int>(f.size()) < lmax + 2) throw PreconditionError("sph_derivatives: need f up to lmax+1");
    std::vector<Complex> d(lmax + 1);
    d[0] = -f[1];
    for (int l = 1; l <= lmax; ++l) d[l] = f[l - 1] - static_cast<double>(l + 1) / z * f[l];
    return d;
}

std::vector<double> legendre(int lmax, double x) {
    std::vector<double> p(lmax + 1);
    p[0] = 1.0;
    if (lmax >= 1) p[1] = x;
    for (int l = 1; l < lmax; ++l) p[l + 1] = ((2 * l + 1) * x * p[l] - l * p[l - 1]) / (l + 1);
    return p;
}

} // namespace bubbly
