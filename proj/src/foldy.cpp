#include "bubbly/foldy.hpp"

#include <chrono>
#include <cmath>

#include <Eigen/LU>

#include "bubbly/errors.hpp"
#include "bubbly/greens.hpp"
#include "bubbly/krylov.hpp"

namespace bubbly {

std::string to_string(FoldyMethod m) {
    switch (m) {
    case FoldyMethod::direct: return "direct";
    case FoldyMethod::iterative: return "iterative";
    case FoldyMethod::automatic: return "auto";
    }
    return "auto";
}

FoldyMethod foldy_method_from_string(const std::string& s) {
    if (s == "direct") return FoldyMethod::direct;
    if (s == "iterative") return FoldyMethod::iterative;
    if (s == "auto") return FoldyMethod::automatic;
    throw PreconditionError("unknown Foldy method '" + s + "'");
}

ComplexVector assemble_rhs(const PointConfiguration& config, const ComplexField& incident) {
    ComplexVector b(static_cast<Eigen::Index>(config.size()));
    for (std::size_t j = 0; j < config.size(); ++j) b[static_cast<Eigen::Index>(j)] = incident(config[j]);
    return b;
}

namespace {

/// Coupling g G(a, b, k); callers guarantee a != b (configurations reject duplicate centers).
inline Complex coupling(const Vec3& a, const Vec3& b, Complex g, double k) {
    const double r = (a - b).norm();
    const double s = -1.0 / (4.0 * kPi * r);
    return g * Complex(s * std::cos(k * r), s * std::sin(k * r));
}

} // namespace

ComplexVector apply_T(const PointConfiguration& config, Complex g, Wavenumber k, const ComplexVector& x) {
    const std::size_t n = config.size();
    if (static_cast<std::size_t>(x.size()) != n) throw PreconditionError("apply_T: vector length mismatch");
    ComplexVector out = ComplexVector::Zero(x.size());
    const double kv = k.value();
    const long nl = static_cast<long>(n);
    // Rows are independent; each inner sum runs in index order, so results do not depend on scheduling.
#pragma omp parallel for schedule(static)
    for (long jl = 0; jl < nl; ++jl) {
        const std::size_t j = static_cast<std::size_t>(jl);
        const Vec3 yj = config[j];
        Complex acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == j) continue;
            acc += coupling(yj, config[i], g, kv) * x[static_cast<Eigen::Index>(i)];
        }
        out[jl] = acc;
    }
    return out;
}

Eigen::MatrixXcd assemble_system(const PointConfiguration& config, Complex g, Wavenumber k) {
    const Eigen::Index n = static_cast<Eigen::Index>(config.size());
    Eigen::MatrixXcd A(n, n);
    const double kv = k.value();
#pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            A(j, i) = (i == j) ? Complex(1.0, 0.0)
                               : -coupling(config[static_cast<std::size_t>(j)], config[static_cast<std::size_t>(i)], g, kv);
        }
    }
    return A;
}

double foldy_residual(const PointConfiguration& config, Complex g, Wavenumber k, const ComplexVector& x,
                      const ComplexVector& b) {
    const ComplexVector r = x - apply_T(config, g, k, x) - b;
    return r.size() == 0 ? 0.0 : r.cwiseAbs().maxCoeff();
}

FoldySolution solve_foldy(const PointConfiguration& config, const ScalingRegime& regime,
                          const ComplexField& incident, const FoldyOptions& options) {
    if (static_cast<std::size_t>(regime.N) != config.size())
        throw PreconditionError("solve_foldy: regime N does not match the configuration");
    if (!(options.tol > 0.0)) throw PreconditionError("solve_foldy: tolerance must be positive");

    const auto t0 = std::chrono::steady_clock::now();
    const Wavenumber k(regime.wavenumber());
    const Complex g = regime.g;
    const ComplexVector b = assemble_rhs(config, incident);
    const double bnorm = b.size() == 0 ? 0.0 : b.cwiseAbs().maxCoeff();
    const double target = options.tol * bnorm;

    FoldySolution sol;
    sol.config_ref = config.fingerprint();
    sol.regime_ref = "N" + std::to_string(regime.N) + "-Lambda" + std::to_string(regime.Lambda) + "-beta0" +
                     std::to_string(regime.beta0);
    sol.method = options.method;
    if (sol.method == FoldyMethod::automatic)
        sol.method = config.size() <= kDirectCrossover ? FoldyMethod::direct : FoldyMethod::iterative;

    if (sol.method == FoldyMethod::direct) {
        const Eigen::MatrixXcd A = assemble_system(config, g, k);
        const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
        const double rcond = lu.rcond();
        if (!(rcond > 1e-13))
            throw NearResonantSystemError("point-interaction matrix is numerically singular (rcond " +
                                          std::to_string(rcond) + ")");
        sol.x = lu.solve(b);
        sol.residual_inf = foldy_residual(config, g, k, sol.x, b);
        for (int refine = 0; refine < 3 && sol.residual_inf > target; ++refine) {
            const ComplexVector r = b - (sol.x - apply_T(config, g, k, sol.x));
            sol.x += lu.solve(r);
            sol.residual_inf = foldy_residual(config, g, k, sol.x, b);
            ++sol.iterations;
        }
        if (sol.residual_inf > target)
            throw NearResonantSystemError("direct solve could not reach the residual tolerance");
    } else {
        auto apply = [&](const ComplexVector& in, ComplexVector& out) { out = in - apply_T(config, g, k, in); };
        GmresOptions gopt;
        gopt.restart = options.restart;
        gopt.max_iterations =
            options.max_iterations > 0
                ? options.max_iterations
                : static_cast<int>(std::ceil(10.0 * std::sqrt(static_cast<double>(config.size()))));
        // ||r||_inf <= ||r||_2, so the 2-norm target certifies the infinity-norm contract.
        gopt.target_residual = target;
        const GmresResult res = gmres(apply, b, gopt, &b);
        sol.x = res.x;
        sol.iterations = res.iterations;
        sol.residual_inf = foldy_residual(config, g, k, sol.x, b);
        if (!res.converged || sol.residual_inf > target)
            throw ConvergenceError("Foldy GMRES did not converge", sol.residual_inf / (bnorm > 0 ? bnorm : 1.0),
                                   res.iterations);
    }
    sol.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return sol;
}

double exclusion_radius(std::size_t N, double epsilon2) {
    return std::pow(static_cast<double>(N), -(1.0 - epsilon2));
}

std::vector<bool> exclusion_mask(const PointConfiguration& config, double epsilon2,
                                 const std::vector<Vec3>& points) {
    if (!(epsilon2 > 0.0 && epsilon2 < 1.0 / 3.0)) throw PreconditionError("exclusion_mask: epsilon2 must lie in (0,1/3)");
    const double radius = exclusion_radius(config.size(), epsilon2);
    const double r2 = radius * radius;
    std::vector<bool> mask(points.size(), false);
    for (std::size_t p = 0; p < points.size(); ++p) {
        for (const auto& y : config.centers()) {
            if ((points[p] - y).squaredNorm() < r2) {
                mask[p] = true;
                break;
            }
        }
    }
    return mask;
}

std::vector<FieldSample> micro_field(const PointConfiguration& config, const ScalingRegime& regime,
                                     const FoldySolution& solution, const ComplexField& incident,
                                     const std::vector<Vec3>& points) {
    if (static_cast<std::size_t>(solution.x.size()) != config.size())
        throw PreconditionError("micro_field: solution does not match the configuration");
    for (const auto& x : points)
        for (const auto& y : config.centers())
            if (x == y) throw SingularEvaluationError("micro_field evaluated at a bubble center");
    const auto mask = exclusion_mask(config, regime.eps.e2, points);
    const double k = regime.wavenumber();
    std::vector<FieldSample> out(points.size());
    const long np = static_cast<long>(points.size());
#pragma omp parallel for schedule(dynamic, 8)
    for (long pl = 0; pl < np; ++pl) {
        const std::size_t p = static_cast<std::size_t>(pl);
        const Vec3& x = points[p];
        Complex acc = 0.0;
        for (std::size_t j = 0; j < config.size(); ++j)
            acc += coupling(x, config[j], regime.g, k) * solution.x[static_cast<Eigen::Index>(j)];
        out[p] = {x, incident(x) + acc, mask[p]};
    }
    return out;
}

FieldSample micro_field(const PointConfiguration& config, const ScalingRegime& regime,
                        const FoldySolution& solution, const ComplexField& incident, const Vec3& x) {
    return micro_field(config, regime, solution, incident, std::vector<Vec3>{x}).front();
}

} // namespace bubbly
