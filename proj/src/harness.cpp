#include "bubbly/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include <boost/random/sobol.hpp>

#include "bubbly/effective.hpp"
#include "bubbly/errors.hpp"
#include "bubbly/greens.hpp"

namespace bubbly {

ExperimentConfig reference_experiment() {
    ExperimentConfig cfg;
    cfg.n_per_axis = {8, 10, 12, 16, 20};
    return cfg;
}

PointConfiguration make_configuration(const ExperimentConfig& cfg, int n_per_axis) {
    if (cfg.generator == Generator::jittered) {
        return generate_jittered(cfg.domain, n_per_axis, cfg.jitter, cfg.seed);
    }
    if (cfg.generator != Generator::periodic)
        throw PreconditionError("experiments support the periodic and jittered generators only");
    return generate_periodic(cfg.domain, n_per_axis);
}

int n_per_axis_for(const ExperimentConfig& cfg, long N) {
    if (N < 2) throw PreconditionError("N must be at least 2");
    int best = 2;
    long best_diff = std::numeric_limits<long>::max();
    for (int n = 2; n <= 400; ++n) {
        long count = 0;
        try {
            count = static_cast<long>(generate_periodic(cfg.domain, n).size());
        } catch (const DegenerateConfigurationError&) {
            continue;
        }
        const long diff = std::labs(count - N);
        if (diff < best_diff) {
            best_diff = diff;
            best = n;
        }
        if (count > 2 * N) break;
    }
    return best;
}

RegimeInputs regime_inputs(const ExperimentConfig& cfg, long N) {
    return {N, cfg.omega, cfg.eps, cfg.Lambda, cfg.beta0, cfg.tau, cfg.v, ShapeConstants::unit_ball()};
}

double fit_rate(const std::vector<std::pair<double, double>>& pairs) {
    if (pairs.size() < 3) throw PreconditionError("fit_rate needs at least three (N, error) pairs");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [n, e] : pairs) {
        if (!(e > 0.0)) throw PreconditionError("fit_rate: errors must be positive");
        if (!(n > 0.0)) throw PreconditionError("fit_rate: N must be positive");
        const double x = std::log(n), y = std::log(e);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double m = static_cast<double>(pairs.size());
    const double denom = m * sxx - sx * sx;
    if (!(std::abs(denom) > 0.0)) throw PreconditionError("fit_rate: N values must not all coincide");
    return (m * sxy - sx * sy) / denom;
}

std::vector<Vec3> sobol_points(const Vec3& lo, const Vec3& hi, std::size_t count) {
    boost::random::sobol engine(3);
    constexpr double two64 = 18446744073709551616.0;
    std::vector<Vec3> pts(count);
    for (auto& p : pts) {
        for (int a = 0; a < 3; ++a) {
            const double u = static_cast<double>(engine()) / two64;
            p[a] = lo[a] + u * (hi[a] - lo[a]);
        }
    }
    return pts;
}

namespace {

std::optional<double> try_fit(const std::vector<std::pair<double, double>>& pairs) {
    if (pairs.size() < 3) return std::nullopt;
    for (const auto& pr : pairs)
        if (!(pr.second > 0.0)) return std::nullopt;
    return fit_rate(pairs);
}

} // namespace

ConvergenceReport run_convergence(const ExperimentConfig& cfg) {
    std::vector<int> resolutions = cfg.n_per_axis;
    if (resolutions.empty())
        for (long N : cfg.N_list) resolutions.push_back(n_per_axis_for(cfg, N));
    if (resolutions.size() < 3) throw PreconditionError("run_convergence needs at least three N values");

    std::vector<PointConfiguration> configs;
    std::vector<ScalingRegime> regimes;
    for (int n : resolutions) {
        configs.push_back(make_configuration(cfg, n));
        regimes.push_back(derive_regime(regime_inputs(cfg, static_cast<long>(configs.back().size()))));
    }
    for (std::size_t i = 1; i < configs.size(); ++i)
        if (configs[i].size() <= configs[i - 1].size())
            throw PreconditionError("run_convergence: N values must be strictly increasing");

    ConvergenceReport rep;
    rep.config = cfg;
    rep.theoretical_exponent = rate_exponent(cfg.eps);

    const double k = cfg.omega * cfg.v;
    const PlaneWave incident(cfg.direction, Wavenumber(k));
    const EffectivePotential V = effective_potential(regimes.front(), configs.front());

    const auto t0 = std::chrono::steady_clock::now();
    LsOptions lopt;
    lopt.tol = cfg.ls_tol;
    const GridField psi = ls_solve(cfg.domain, V, incident, Wavenumber(k), cfg.grid_m, lopt);
    rep.ls_iterations = psi.iterations;
    rep.ls_residual = psi.relative_residual;
    rep.ls_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    // One low-discrepancy stream shared by all rows; each row takes points until enough are admitted.
    const std::size_t pool_size = static_cast<std::size_t>(std::max(cfg.samples, 1)) * 4 + 64;
    const std::vector<Vec3> pool = sobol_points(cfg.domain.bounding_lo(), cfg.domain.bounding_hi(), pool_size);
    std::vector<Complex> pool_psi;
    std::size_t pool_evaluated = 0;
    auto psi_on_pool = [&](std::size_t upto) {
        if (upto <= pool_evaluated) return;
        const std::vector<Vec3> chunk(pool.begin() + static_cast<long>(pool_evaluated), pool.begin() + static_cast<long>(upto));
        const auto vals = ls_evaluate(psi, chunk, incident);
        pool_psi.insert(pool_psi.end(), vals.begin(), vals.end());
        pool_evaluated = upto;
    };

    FoldyOptions fopt;
    fopt.method = cfg.method;
    fopt.tol = cfg.foldy_tol;

    for (std::size_t r = 0; r < configs.size(); ++r) {
        const PointConfiguration& config = configs[r];
        const ScalingRegime& regime = regimes[r];
        ConvergenceRow row;
        row.n_per_axis = resolutions[r];
        row.N = regime.N;
        row.s = regime.s;
        row.r_N = config.separation_radius();
        try {
            const FoldySolution sol = solve_foldy(config, regime, incident, fopt);
            row.method = to_string(sol.method);
            row.iterations = sol.iterations;
            row.residual_inf = sol.residual_inf;
            row.seconds = sol.seconds;

            const auto psi_centers = ls_evaluate(psi, config.centers(), incident);
            for (std::size_t j = 0; j < config.size(); ++j)
                row.amplitude_error =
                    std::max(row.amplitude_error, std::abs(sol.x[static_cast<Eigen::Index>(j)] - psi_centers[j]));

            const auto mask = exclusion_mask(config, regime.eps.e2, pool);
            std::vector<std::size_t> chosen;
            std::size_t used = 0;
            while (used < pool.size() && row.admitted < cfg.samples) {
                chosen.push_back(used);
                if (mask[used]) {
                    ++row.excluded;
                } else {
                    ++row.admitted;
                }
                ++used;
            }
            psi_on_pool(used);
            // Excluded points may sit arbitrarily close to a bubble; only admitted ones are evaluated.
            std::vector<Vec3> admitted_pts;
            for (std::size_t q : chosen)
                if (!mask[q]) admitted_pts.push_back(pool[q]);
            const auto micro = micro_field(config, regime, sol, incident, admitted_pts);
            std::size_t a = 0;
            for (std::size_t q : chosen) {
                SampleRecord rec{regime.N, pool[q], Complex(std::nan(""), std::nan("")), pool_psi[q], std::nan(""),
                                 static_cast<bool>(mask[q])};
                if (!mask[q]) {
                    rec.micro = micro[a++].value;
                    rec.abs_err = std::abs(rec.micro - rec.effective);
                    row.field_error = std::max(row.field_error, rec.abs_err);
                }
                rep.samples.push_back(rec);
            }
        } catch (const Error& e) {
            row.failed = true;
            row.failure = e.what();
        }
        rep.rows.push_back(row);
    }

    std::vector<std::pair<double, double>> amp, fld;
    for (const auto& row : rep.rows) {
        if (row.failed) continue;
        amp.emplace_back(static_cast<double>(row.N), row.amplitude_error);
        fld.emplace_back(static_cast<double>(row.N), row.field_error);
        const double denom = row.amplitude_error + std::pow(static_cast<double>(row.N), -rep.theoretical_exponent);
        rep.field_constant = std::max(rep.field_constant, row.field_error / denom);
    }
    rep.fitted_slope_amplitude = try_fit(amp);
    rep.fitted_slope_field = try_fit(fld);
    return rep;
}

bool decreasing_with_allowance(const std::vector<double>& values, double noise) {
    for (std::size_t i = 1; i < values.size(); ++i)
        if (!(values[i] <= (1.0 + noise) * values[i - 1])) return false;
    return true;
}

ConvergenceVerdict assess_convergence(const ConvergenceReport& report, double noise, double max_slope) {
    std::vector<double> amp, fld;
    bool any_failed = false;
    for (const auto& row : report.rows) {
        if (row.failed) {
            any_failed = true;
            continue;
        }
        amp.push_back(row.amplitude_error);
        fld.push_back(row.field_error);
    }
    ConvergenceVerdict v{};
    v.amplitude_decreasing = !any_failed && decreasing_with_allowance(amp, noise);
    v.field_decreasing = !any_failed && decreasing_with_allowance(fld, noise);
    v.slope_ok = report.fitted_slope_amplitude.has_value() && *report.fitted_slope_amplitude <= max_slope;

    // Independently re-verify every excluded sample against the exclusion radius.
    v.mask_exact = true;
    std::map<long, PointConfiguration> by_n;
    std::vector<int> res = report.config.n_per_axis;
    if (res.empty())
        for (long N : report.config.N_list) res.push_back(n_per_axis_for(report.config, N));
    for (int n : res) {
        PointConfiguration c = make_configuration(report.config, n);
        by_n.emplace(static_cast<long>(c.size()), std::move(c));
    }
    for (const auto& s : report.samples) {
        const auto it = by_n.find(s.N);
        if (it == by_n.end()) continue;
        const double radius = exclusion_radius(it->second.size(), report.config.eps.e2);
        double nearest2 = std::numeric_limits<double>::infinity();
        for (const auto& y : it->second.centers()) nearest2 = std::min(nearest2, (s.point - y).squaredNorm());
        const bool within = nearest2 < radius * radius;
        if (within != s.excluded) v.mask_exact = false;
    }
    return v;
}

bool AssumptionReport::all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const AssumptionCheck& c) { return c.passed; });
}

const AssumptionCheck& AssumptionReport::find(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return c;
    throw PreconditionError("no assumption check named " + name);
}

std::vector<double> default_h_grid(const PointConfiguration& config) {
    const double lo = 2.0 * config.separation_radius();
    const double hi = 0.5 * config.domain().diameter();
    std::vector<double> grid;
    if (!(lo > 0.0) || hi <= lo) return {std::max(lo, hi)};
    for (int i = 0; i < 6; ++i) grid.push_back(lo * std::pow(hi / lo, i / 5.0));
    return grid;
}

AssumptionReport check_assumptions(const PointConfiguration& config, const ScalingRegime& regime,
                                   const std::vector<double>& h_grid, const AssumptionThresholds& thr) {
    AssumptionReport rep;
    const double N = static_cast<double>(config.size());
    const double rN = config.separation_radius();

    {
        AssumptionCheck c{"A3_min_separation", false, {}, ""};
        if (config.size() >= 2) {
            const double sep = min_separation(config);
            c.measured["min_separation"] = sep;
            c.measured["r_N"] = rN;
            c.measured["eta"] = config.eta();
            c.passed = sep >= rN && rN > 0.0;
        } else {
            c.detail = "fewer than two centers";
        }
        rep.checks.push_back(c);
    }
    {
        AssumptionCheck c{"A3_size_ratio", false, {}, ""};
        const double ratio = rN > 0.0 ? regime.s / rN : std::numeric_limits<double>::infinity();
        c.measured["s"] = regime.s;
        c.measured["s_over_r_N"] = ratio;
        c.measured["threshold"] = thr.size_ratio;
        c.passed = ratio <= thr.size_ratio;
        rep.checks.push_back(c);
    }
    {
        AssumptionCheck c{"A4_regularity", true, {}, ""};
        std::vector<Vec3> probes;
        for (const auto& p : sobol_points(config.domain().bounding_lo(), config.domain().bounding_hi(),
                                          static_cast<std::size_t>(thr.probes) * 8)) {
            if (config.domain().contains(p)) probes.push_back(p);
            if (static_cast<int>(probes.size()) == thr.probes) break;
        }
        double c2 = 0.0, c1 = 0.0;
        for (double h : h_grid) {
            if (!(h >= 2.0 * rN * (1.0 - 1e-12))) {
                c.passed = false;
                c.detail = "h grid contains values below 2 r_N";
                continue;
            }
            for (const auto& x : probes) {
                const RegularitySums s = regularity_sums(config, x, h);
                c2 = std::max(c2, s.s2 * std::pow(h, regime.eps.e0));
                c1 = std::max(c1, s.s1 / h);
            }
        }
        c.measured["s2_constant"] = c2;
        c.measured["s1_constant"] = c1;
        c.measured["probes"] = static_cast<double>(probes.size());
        c.passed = c.passed && c2 <= thr.s2_constant && c1 <= thr.s1_constant;
        rep.checks.push_back(c);
    }
    {
        AssumptionCheck c{"A5_quadrature", false, {}, ""};
        // Laplace kernel: the smooth remainder of G(., ., k) does not affect the rate.
        const double alpha = (1.0 - regime.eps.e0) / 2.0;
        const double scale = std::pow(N, alpha / 3.0);
        const Vec3 mid = 0.5 * (config.domain().bounding_lo() + config.domain().bounding_hi());
        const double sigma = config.domain().diameter() / 4.0;
        try {
            const double e_one = quadrature_error(config, [](const Vec3&) { return 1.0; }, Wavenumber(0.0),
                                                  thr.reference_m);
            const double e_bump = quadrature_error(
                config, [&](const Vec3& x) { return std::exp(-(x - mid).squaredNorm() / (2.0 * sigma * sigma)); },
                Wavenumber(0.0), thr.reference_m);
            c.measured["error_constant_f"] = e_one;
            c.measured["error_gaussian_f"] = e_bump;
            c.measured["alpha"] = alpha;
            c.measured["constant"] = std::max(e_one, e_bump) * scale;
            c.passed = std::max(e_one, e_bump) * scale <= thr.quadrature_constant;
        } catch (const Error& e) {
            c.detail = e.what();
        }
        rep.checks.push_back(c);
    }
    {
        AssumptionCheck c{"A6_epsilon", false, {}, ""};
        c.measured["epsilon0"] = regime.eps.e0;
        c.measured["bound"] = 3.0 * regime.eps.e1 / (1.0 - regime.eps.e1);
        c.passed = epsilon_constraint_holds(regime.eps);
        rep.checks.push_back(c);
    }
    return rep;
}

} // namespace bubbly
