#include "bubbly/mie.hpp"

#include <algorithm>
#include <cmath>

#include "bubbly/errors.hpp"
#include "bubbly/special_functions.hpp"

namespace bubbly {

Complex interior_wavenumber(double k, Complex V) {
    Complex q = std::sqrt(Complex(k * k) - V);
    if (q.imag() < 0.0) q = -q;
    return q;
}

int default_l_max(double k, double R) { return static_cast<int>(std::ceil(k * R)) + 12; }

namespace {

Complex i_pow(int l) {
    switch (l % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
    }
}

} // namespace

BallSeriesSolution::BallSeriesSolution(double R, Complex V, double k, int l_max)
    : R_(R), V_(V), k_(k), k_in_(interior_wavenumber(k, V)), l_max_(l_max), c_(l_max + 1), b_(l_max + 1) {
    const double p = k * R;
    const Complex q = k_in_ * R;
    const auto jp = sph_bessel_j(l_max + 1, Complex(p, 0.0));
    const auto hp = sph_hankel1(l_max + 1, p);
    const auto jq = sph_bessel_j(l_max + 1, q);
    const auto djp = sph_derivatives(jp, Complex(p, 0.0), l_max);
    const auto dhp = sph_derivatives(hp, Complex(p, 0.0), l_max);
    const auto djq = sph_derivatives(jq, q, l_max);
    for (int l = 0; l <= l_max; ++l) {
        const Complex a = static_cast<double>(2 * l + 1) * i_pow(l);
        const Complex det = -k * jq[l] * dhp[l] + k_in_ * hp[l] * djq[l];
        if (det == Complex(0.0, 0.0)) throw NearResonantSystemError("ball series: singular mode matching");
        c_[l] = a * k * (hp[l] * djp[l] - jp[l] * dhp[l]) / det;
        b_[l] = a * (k * jq[l] * djp[l] - k_in_ * djq[l] * jp[l]) / det;
    }
}

Complex BallSeriesSolution::operator()(const Vec3& x) const {
    const double r = x.norm();
    const double ct = r > 0.0 ? std::clamp(x.z() / r, -1.0, 1.0) : 1.0;
    const auto P = legendre(l_max_, ct);
    Complex sum = 0.0;
    if (r < R_) {
        const auto j = sph_bessel_j(l_max_, k_in_ * r);
        for (int l = 0; l <= l_max_; ++l) sum += c_[l] * j[l] * P[l];
    } else {
        // The incident part is summed in closed form; only the scattered series is truncated.
        const auto h = sph_hankel1(l_max_, k_ * r);
        for (int l = 0; l <= l_max_; ++l) sum += b_[l] * h[l] * P[l];
        sum += std::exp(Complex(0.0, k_ * x.z()));
    }
    return sum;
}

std::vector<Complex> BallSeriesSolution::evaluate(const std::vector<Vec3>& points) const {
    std::vector<Complex> out(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) out[i] = (*this)(points[i]);
    return out;
}

double BallSeriesSolution::continuity_residual() const {
    const double p = k_ * R_;
    const Complex q = k_in_ * R_;
    const auto jp = sph_bessel_j(l_max_ + 1, Complex(p, 0.0));
    const auto hp = sph_hankel1(l_max_ + 1, p);
    const auto jq = sph_bessel_j(l_max_ + 1, q);
    const auto djp = sph_derivatives(jp, Complex(p, 0.0), l_max_);
    const auto dhp = sph_derivatives(hp, Complex(p, 0.0), l_max_);
    const auto djq = sph_derivatives(jq, q, l_max_);
    double val_err = 0.0, der_err = 0.0, val_ref = 0.0, der_ref = 0.0;
    for (int l = 0; l <= l_max_; ++l) {
        const Complex a = static_cast<double>(2 * l + 1) * i_pow(l);
        const Complex outer_val = a * jp[l] + b_[l] * hp[l];
        const Complex outer_der = k_ * (a * djp[l] + b_[l] * dhp[l]);
        val_err = std::max(val_err, std::abs(c_[l] * jq[l] - outer_val));
        der_err = std::max(der_err, std::abs(c_[l] * k_in_ * djq[l] - outer_der));
        val_ref = std::max(val_ref, std::abs(outer_val));
        der_ref = std::max(der_ref, std::abs(outer_der));
    }
    return std::max(val_ref > 0 ? val_err / val_ref : val_err, der_ref > 0 ? der_err / der_ref : der_err);
}

BallSeriesSolution mie_ball_solution(double R, Complex V, Wavenumber k, int l_max) {
    if (!(R > 0.0)) throw PreconditionError("mie_ball_solution: radius must be positive");
    if (!(k.value() > 0.0)) throw PreconditionError("mie_ball_solution: k must be positive");
    if (l_max < k.value() * R + 10.0) throw PreconditionError("mie_ball_solution: l_max must be at least kR + 10");
    BallSeriesSolution sol(R, V, k.value(), l_max);

    // Mode amplitude on the surface; the raw c_l decay only like (k/k_in)^l.
    const auto jq = sph_bessel_j(l_max, sol.k_in() * R);
    double peak = 0.0;
    for (int l = 0; l <= l_max; ++l) peak = std::max(peak, std::abs(sol.interior_coefficients()[l] * jq[l]));
    const double tail = std::abs(sol.interior_coefficients()[l_max] * jq[l_max]);
    if (tail > 1e-12 * peak)
        throw TruncationError("ball series: l_max too small, tail mode amplitude " + std::to_string(tail / peak));
    return sol;
}

} // namespace bubbly
