#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bubbly/foldy.hpp"
#include "bubbly/geometry.hpp"
#include "bubbly/physics.hpp"

namespace bubbly {

/// Everything an experiment file can set.
struct ExperimentConfig {
    Domain domain = Domain::ball(Vec3::Zero(), 1.0);
    Generator generator = Generator::periodic;
    double jitter = 0.25;
    /// Lattice resolutions; when empty, N_list is mapped onto the closest lattice.
    std::vector<int> n_per_axis;
    std::vector<long> N_list;
    double omega = 1.0;
    Epsilons eps{0.3, 0.4, 0.25};
    double Lambda = 2.0;
    double beta0 = -1.0;
    double tau = 1.0;
    double v = 1.0;
    Vec3 direction = Vec3::UnitZ();
    int grid_m = 48;
    int samples = 500;
    std::uint64_t seed = 0;
    double foldy_tol = 1e-10;
    double ls_tol = 1e-8;
    FoldyMethod method = FoldyMethod::automatic;
};

/// Reference sweep: unit ball, omega = tau = v = 1, beta0 = -1, eps = (0.3, 0.4, 0.25), Lambda = 2.
ExperimentConfig reference_experiment();

PointConfiguration make_configuration(const ExperimentConfig& cfg, int n_per_axis);

/// Lattice resolution whose realized count is closest to N.
int n_per_axis_for(const ExperimentConfig& cfg, long N);

RegimeInputs regime_inputs(const ExperimentConfig& cfg, long N);

struct SampleRecord {
    long N;
    Vec3 point;
    Complex micro;
    Complex effective;
    double abs_err;
    bool excluded;
};

struct ConvergenceRow {
    int n_per_axis = 0;
    long N = 0;
    double s = 0.0;
    double r_N = 0.0;
    double amplitude_error = 0.0;
    double field_error = 0.0;
    int admitted = 0;
    int excluded = 0;
    std::string method;
    int iterations = 0;
    double residual_inf = 0.0;
    double seconds = 0.0;
    bool failed = false;
    std::string failure;
};

struct ConvergenceReport {
    ExperimentConfig config;
    double theoretical_exponent = 0.0;
    std::vector<ConvergenceRow> rows;
    std::optional<double> fitted_slope_amplitude;
    std::optional<double> fitted_slope_field;
    /// max over rows of field_error / (amplitude_error + N^-r*).
    double field_constant = 0.0;
    int ls_iterations = 0;
    double ls_residual = 0.0;
    double ls_seconds = 0.0;
    std::vector<SampleRecord> samples;
};

/// Least-squares slope of log(error) against log(N).
double fit_rate(const std::vector<std::pair<double, double>>& pairs);

/// Quasi-random points (Sobol) in the axis-aligned box [lo, hi].
std::vector<Vec3> sobol_points(const Vec3& lo, const Vec3& hi, std::size_t count);

/// Runs the discrete-versus-continuum sweep.
///
/// All regimes are derived before any solve, so an inadmissible epsilon
/// triple or beta0 = 0 aborts early. The effective field is solved once and
/// evaluated at bubble centers and sample points through its integral
/// representation. Failed rows are kept in the report and left out of the fits.
ConvergenceReport run_convergence(const ExperimentConfig& cfg);

struct ConvergenceVerdict {
    bool amplitude_decreasing;
    bool field_decreasing;
    bool slope_ok;
    bool mask_exact;
    bool passed() const { return amplitude_decreasing && field_decreasing && slope_ok && mask_exact; }
};

/// Each error may exceed its predecessor by at most `noise` (relative); slope must be <= max_slope.
bool decreasing_with_allowance(const std::vector<double>& values, double noise);
ConvergenceVerdict assess_convergence(const ConvergenceReport& report, double noise = 0.2,
                                      double max_slope = -0.03);

struct AssumptionCheck {
    std::string name;
    bool passed;
    std::map<std::string, double> measured;
    std::string detail;
};

struct AssumptionReport {
    std::vector<AssumptionCheck> checks;
    bool all_passed() const;
    const AssumptionCheck& find(const std::string& name) const;
};

struct AssumptionThresholds {
    double size_ratio = 1e-2;      ///< s / r_N
    double s2_constant = 10.0;     ///< max s2(h) h^e0
    double s1_constant = 20.0;     ///< max s1(h) / h
    double quadrature_constant = 1.0; ///< max error * N^(alpha/3)
    int probes = 20;
    int reference_m = 64;
};

/// Default h grid: six log-spaced values from 2 r_N to half the domain diameter.
std::vector<double> default_h_grid(const PointConfiguration& config);

/// Measures the configuration assumptions; failures become report entries, never exceptions.
AssumptionReport check_assumptions(const PointConfiguration& config, const ScalingRegime& regime,
                                   const std::vector<double>& h_grid, const AssumptionThresholds& thr = {});

} // namespace bubbly
