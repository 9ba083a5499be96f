#pragma once

#include <string>
#include <vector>

#include "bubbly/geometry.hpp"
#include "bubbly/physics.hpp"
#include "bubbly/types.hpp"

namespace bubbly {

enum class FoldyMethod { direct, iterative, automatic };

std::string to_string(FoldyMethod m);
FoldyMethod foldy_method_from_string(const std::string& s);

/// Largest N solved by dense factorization under FoldyMethod::automatic.
inline constexpr std::size_t kDirectCrossover = 3000;

/// Amplitudes x_j of the point-interaction system x - T x = b.
struct FoldySolution {
    ComplexVector x;
    double residual_inf = 0.0;
    FoldyMethod method = FoldyMethod::direct;
    int iterations = 0;
    double seconds = 0.0;
    std::string regime_ref;
    std::string config_ref;
};

struct FieldSample {
    Vec3 point;
    Complex value;
    bool inside_exclusion;
};

/// b_j = u_inc(y_j).
ComplexVector assemble_rhs(const PointConfiguration& config, const ComplexField& incident);

/// (T x)_j = sum_{i != j} g G(y_j, y_i, k) x_i, exact O(N^2) summation with a fixed inner order.
ComplexVector apply_T(const PointConfiguration& config, Complex g, Wavenumber k, const ComplexVector& x);

/// Dense I - T.
Eigen::MatrixXcd assemble_system(const PointConfiguration& config, Complex g, Wavenumber k);

/// ||x - T x - b||_inf.
double foldy_residual(const PointConfiguration& config, Complex g, Wavenumber k, const ComplexVector& x,
                      const ComplexVector& b);

struct FoldyOptions {
    FoldyMethod method = FoldyMethod::automatic;
    double tol = 1e-10;
    int restart = 80;
    int max_iterations = 0; ///< 0 means 10 * sqrt(N)
};

/// Solves x - T x = b with ||x - Tx - b||_inf <= tol ||b||_inf.
///
/// Direct: LU of the dense matrix, refined iteratively if needed; throws
/// NearResonantSystemError when the factorization is numerically singular.
/// Iterative: matrix-free GMRES on apply_T; throws ConvergenceError at the cap.
FoldySolution solve_foldy(const PointConfiguration& config, const ScalingRegime& regime,
                          const ComplexField& incident, const FoldyOptions& options = {});

/// Exclusion radius N^-(1 - epsilon2).
double exclusion_radius(std::size_t N, double epsilon2);

/// true where a point lies strictly closer than N^-(1-epsilon2) to some center.
std::vector<bool> exclusion_mask(const PointConfiguration& config, double epsilon2,
                                 const std::vector<Vec3>& points);

/// Reconstructed field u_inc(x) + sum_j g G(x, y_j, k) x_j.
FieldSample micro_field(const PointConfiguration& config, const ScalingRegime& regime,
                        const FoldySolution& solution, const ComplexField& incident, const Vec3& x);

std::vector<FieldSample> micro_field(const PointConfiguration& config, const ScalingRegime& regime,
                                     const FoldySolution& solution, const ComplexField& incident,
                                     const std::vector<Vec3>& points);

} // namespace bubbly
