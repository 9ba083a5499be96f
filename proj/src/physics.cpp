#include "bubbly/physics.hpp"

#include <algorithm>
#include <cmath>

#include "bubbly/errors.hpp"

namespace bubbly {

ShapeConstants ShapeConstants::unit_ball() {
    return {-4.0 * kPi, 4.0 * kPi, 4.0 * kPi / 3.0, "unit_ball"};
}

MediumParams::MediumParams(double rho, double kappa, double rho_b, double kappa_b)
    : rho_(rho), kappa_(kappa), rho_b_(rho_b), kappa_b_(kappa_b) {
    if (!(rho > 0 && kappa > 0 && rho_b > 0 && kappa_b > 0))
        throw PreconditionError("medium parameters must be positive");
}

double MediumParams::v() const { return std::sqrt(rho_ / kappa_); }
double MediumParams::v_b() const { return std::sqrt(rho_b_ / kappa_b_); }
double MediumParams::tau() const { return v_b() / v(); }
double MediumParams::delta() const { return rho_b_ / rho_; }
double MediumParams::k(double omega) const { return omega * v(); }
double MediumParams::k_b(double omega) const { return omega * v_b(); }

double minnaert_frequency(double s, double delta, double tau, double v, const ShapeConstants& shape) {
    if (!(s > 0 && delta > 0 && tau > 0 && v > 0 && shape.cap_mag > 0 && shape.vol > 0))
        throw PreconditionError("minnaert_frequency: all inputs must be positive");
    return std::sqrt(shape.cap_mag * delta / (tau * tau * v * v * shape.vol)) / s;
}

double rate_exponent(const Epsilons& eps) {
    return std::min({(1.0 - eps.e0) / 6.0, (1.0 - eps.e2) / 3.0, eps.e2,
                     eps.e1 / (1.0 - eps.e1) - eps.e0 / 3.0});
}

bool epsilon_constraint_holds(const Epsilons& eps) {
    return eps.e0 < 3.0 * eps.e1 / (1.0 - eps.e1);
}

double damping_gamma(const DampingInputs& in) {
    const double cap = in.shape.cap_mag;
    const double radiative = (in.tau + 1.0) * in.v * cap * in.s * in.omega / (8.0 * kPi);
    const double contrast = (in.tau - 1.0) * cap * cap * in.delta /
                            (8.0 * kPi * in.tau * in.tau * in.v * in.shape.vol * in.omega * in.s);
    return radiative - contrast;
}

double damping_gamma(const ScalingRegime& r) {
    return damping_gamma({r.tau, r.v, r.s, r.omega, r.delta, r.shape});
}

Complex scattering_coefficient(const ScatteringInputs& in) {
    const Complex denom(in.beta0 * std::pow(in.s, in.e1), in.gamma);
    if (denom == Complex(0.0, 0.0))
        throw ExactResonanceError("scattering coefficient: zero denominator");
    return -in.s * in.shape.cap_signed / denom;
}

Complex scattering_coefficient(const ScalingRegime& r) {
    return scattering_coefficient({r.s, r.beta0, r.eps.e1, r.gamma, r.shape});
}

BetaLimit beta_limit(double beta0, double gamma, double s, double e1, const ShapeConstants& shape) {
    if (beta0 == 0.0)
        throw ExactResonanceError("beta0 = 0: frequency equals the Minnaert frequency");
    const double beta = -shape.cap_signed / beta0;
    const Complex beta_N = -shape.cap_signed / Complex(beta0, gamma * std::pow(s, -e1));
    return {beta, beta_N};
}

BetaLimit beta_limit(const ScalingRegime& r) {
    return beta_limit(r.beta0, r.gamma, r.s, r.eps.e1, r.shape);
}

ScalingRegime derive_regime(const RegimeInputs& in) {
    if (in.beta0 == 0.0)
        throw ExactResonanceError(
            "beta0 = 0 places the frequency exactly at the Minnaert resonance; "
            "no effective medium exists there");
    if (in.N < 1) throw PreconditionError("derive_regime: N must be at least 1");
    if (!(in.omega > 0.0)) throw PreconditionError("derive_regime: omega must be positive");
    if (!(in.tau > 0.0 && in.v > 0.0)) throw PreconditionError("derive_regime: tau and v must be positive");
    if (!(in.Lambda >= 0.0)) throw PreconditionError("derive_regime: Lambda must be nonnegative");
    const Epsilons& e = in.eps;
    if (!(e.e0 > 0 && e.e0 < 1 && e.e1 > 0 && e.e1 < 1))
        throw AssumptionViolationError("epsilon0 and epsilon1 must lie in (0,1)");
    if (!(e.e2 > 0 && e.e2 < 1.0 / 3.0))
        throw AssumptionViolationError("epsilon2 must lie in (0,1/3)");
    if (!epsilon_constraint_holds(e))
        throw AssumptionViolationError("epsilon0 < 3 epsilon1 / (1 - epsilon1) violated");

    ScalingRegime r{};
    r.N = in.N;
    r.omega = in.omega;
    r.eps = e;
    r.Lambda = in.Lambda;
    r.beta0 = in.beta0;
    r.shape = in.shape;
    r.tau = in.tau;
    r.v = in.v;

    if (in.Lambda == 0.0) {
        // No bubbles in the limit: s = 0 and every coupling vanishes.
        r.s = 0.0;
        r.delta = 0.0;
        r.omega_M = 0.0;
        r.gamma = 0.0;
        r.g = 0.0;
        r.beta = -in.shape.cap_signed / in.beta0;
        r.beta_N = r.beta;
        r.r_exponent = rate_exponent(e);
        return r;
    }

    r.s = std::pow(in.Lambda / static_cast<double>(in.N), 1.0 / (1.0 - e.e1));
    const double detuning = in.beta0 * std::pow(r.s, e.e1);
    if (!(1.0 - detuning > 0.0))
        throw AssumptionViolationError("1 - beta0 s^epsilon1 must be positive");
    r.delta = in.omega * in.omega * r.s * r.s * (1.0 - detuning) * in.tau * in.tau * in.v * in.v *
              in.shape.vol / in.shape.cap_mag;
    r.omega_M = minnaert_frequency(r.s, r.delta, in.tau, in.v, in.shape);
    r.gamma = damping_gamma(r);
    r.g = scattering_coefficient(r);
    const BetaLimit b = beta_limit(r);
    r.beta = b.beta;
    r.beta_N = b.beta_N;
    r.r_exponent = rate_exponent(e);
    return r;
}

EffectivePotential::EffectivePotential(double beta, double Lambda, Domain domain)
    : inside_(beta * Lambda / domain.volume()), domain_(std::move(domain)) {}

double EffectivePotential::operator()(const Vec3& x) const noexcept {
    return domain_.contains(x) ? inside_ : 0.0;
}

EffectivePotential effective_potential(const ScalingRegime& regime, const PointConfiguration& config) {
    if (static_cast<std::size_t>(regime.N) != config.size())
        throw PreconditionError("effective_potential: regime and configuration disagree on N");
    return EffectivePotential(regime.beta, regime.Lambda, config.domain());
}

Complex effective_index(double V, double k) {
    if (!(k > 0.0)) throw PreconditionError("effective_index: k must be positive");
    return std::sqrt(Complex(1.0 - V / (k * k), 0.0));
}

} // namespace bubbly
