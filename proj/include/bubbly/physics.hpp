#pragma once

#include <string>

#include "bubbly/geometry.hpp"
#include "bubbly/types.hpp"

namespace bubbly {

/// Capacity and volume of the reference bubble shape.
///
/// `cap_signed` follows the negative Green-function convention, so it is
/// negative for every shape (-4 pi for the unit ball). Resonance formulas use
/// the magnitude; the scattering coefficient and limit coefficient use the sign.
struct ShapeConstants {
    double cap_signed;
    double cap_mag;
    double vol;
    std::string label;

    static ShapeConstants unit_ball();
};

/// Background and bubble material parameters and the contrasts derived from them.
class MediumParams {
  public:
    MediumParams(double rho, double kappa, double rho_b, double kappa_b);

    double rho() const noexcept { return rho_; }
    double kappa() const noexcept { return kappa_; }
    double rho_b() const noexcept { return rho_b_; }
    double kappa_b() const noexcept { return kappa_b_; }

    double v() const;
    double v_b() const;
    double tau() const;
    double delta() const;
    double k(double omega) const;
    double k_b(double omega) const;

  private:
    double rho_, kappa_, rho_b_, kappa_b_;
};

struct Epsilons {
    double e0;
    double e1;
    double e2;
};

/// Every coupled scaling parameter of an N-bubble experiment.
///
/// Built only by derive_regime(), which enforces the scaling identities
/// s^(1-e1) N = Lambda and 1 - (omega_M/omega)^2 = beta0 s^e1.
struct ScalingRegime {
    long N;
    double omega;
    Epsilons eps;
    double Lambda;
    double beta0;
    ShapeConstants shape;
    double tau;
    double v;

    double s;
    double delta;
    double omega_M;
    double gamma;
    Complex g;
    double beta;
    Complex beta_N;
    double r_exponent;

    double wavenumber() const noexcept { return omega * v; }
};

double minnaert_frequency(double s, double delta, double tau, double v, const ShapeConstants& shape);

struct RegimeInputs {
    long N;
    double omega;
    Epsilons eps;
    double Lambda;
    double beta0;
    double tau;
    double v;
    ShapeConstants shape;
};

/// Derives s, delta, omega_M, gamma, g, beta, beta_N and the guaranteed rate.
///
/// Throws ExactResonanceError for beta0 == 0 and AssumptionViolationError when
/// the epsilon constraints fail or 1 - beta0 s^e1 <= 0.
ScalingRegime derive_regime(const RegimeInputs& in);

/// Theoretical convergence exponent min{(1-e0)/6, (1-e2)/3, e2, e1/(1-e1) - e0/3}.
double rate_exponent(const Epsilons& eps);

/// True iff e0 < 3 e1 / (1 - e1).
bool epsilon_constraint_holds(const Epsilons& eps);

struct DampingInputs {
    double tau;
    double v;
    double s;
    double omega;
    double delta;
    ShapeConstants shape;
};

double damping_gamma(const DampingInputs& in);
double damping_gamma(const ScalingRegime& regime);

struct ScatteringInputs {
    double s;
    double beta0;
    double e1;
    double gamma;
    ShapeConstants shape;
};

Complex scattering_coefficient(const ScatteringInputs& in);
Complex scattering_coefficient(const ScalingRegime& regime);

struct BetaLimit {
    double beta;
    Complex beta_N;
};

BetaLimit beta_limit(double beta0, double gamma, double s, double e1, const ShapeConstants& shape);
BetaLimit beta_limit(const ScalingRegime& regime);

/// V(x) = beta * Lambda * density(x), constant inside the domain.
class EffectivePotential {
  public:
    EffectivePotential(double beta, double Lambda, Domain domain);

    double operator()(const Vec3& x) const noexcept;
    double inside_value() const noexcept { return inside_; }
    const Domain& domain() const noexcept { return domain_; }

  private:
    double inside_;
    Domain domain_;
};

EffectivePotential effective_potential(const ScalingRegime& regime, const PointConfiguration& config);

/// n_eff = sqrt(1 - V/k^2), principal branch.
Complex effective_index(double V, double k);

} // namespace bubbly
