// Command-line front end: simulate, effective, oracle, converge, check-assumptions.
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "bubbly/effective.hpp"
#include "bubbly/errors.hpp"
#include "bubbly/foldy.hpp"
#include "bubbly/greens.hpp"
#include "bubbly/harness.hpp"
#include "bubbly/io.hpp"
#include "bubbly/mie.hpp"
#include "bubbly/physics.hpp"

namespace {

using namespace bubbly;
using bubbly::io::json;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitSolver = 2;
constexpr int kExitAssert = 3;

struct Overrides {
    std::string config;
    std::optional<double> Lambda, beta0, omega;
    std::optional<std::uint64_t> seed;
    std::optional<int> grid_m, samples;
    std::optional<std::string> method, generator;
    std::vector<int> n_per_axis;
    std::vector<long> N;
    std::string out;
    std::string csv;
    bool assert_pass = false;
};

void add_experiment_options(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--config", o.config, "experiment JSON file");
    cmd->add_option("--Lambda", o.Lambda, "volume-fraction constant");
    cmd->add_option("--beta0", o.beta0, "detuning coefficient");
    cmd->add_option("--omega", o.omega, "frequency");
    cmd->add_option("--seed", o.seed, "random seed");
    cmd->add_option("--grid-m", o.grid_m, "voxels per axis for the effective solve");
    cmd->add_option("--samples", o.samples, "admitted field sample points");
    cmd->add_option("--method", o.method, "Foldy solver: direct, iterative or auto");
    cmd->add_option("--generator", o.generator, "periodic or jittered");
    cmd->add_option("--n-per-axis", o.n_per_axis, "lattice resolutions");
    cmd->add_option("--N", o.N, "target bubble counts (mapped to the closest lattice)");
    cmd->add_option("--out", o.out, "output path (stdout when omitted)");
}

ExperimentConfig load_experiment(const Overrides& o) {
    ExperimentConfig cfg = reference_experiment();
    if (!o.config.empty()) cfg = io::experiment_from_json(io::read_json_file(o.config));
    if (o.Lambda) cfg.Lambda = *o.Lambda;
    if (o.beta0) cfg.beta0 = *o.beta0;
    if (o.omega) cfg.omega = *o.omega;
    if (o.seed) cfg.seed = *o.seed;
    if (o.grid_m) cfg.grid_m = *o.grid_m;
    if (o.samples) cfg.samples = *o.samples;
    if (o.method) cfg.method = foldy_method_from_string(*o.method);
    if (o.generator) cfg.generator = generator_from_string(*o.generator);
    if (!o.n_per_axis.empty()) {
        cfg.n_per_axis = o.n_per_axis;
        cfg.N_list.clear();
    } else if (!o.N.empty()) {
        cfg.N_list = o.N;
        cfg.n_per_axis.clear();
    }
    if (cfg.n_per_axis.empty() && cfg.N_list.empty()) cfg.n_per_axis = reference_experiment().n_per_axis;
    return cfg;
}

int first_resolution(const ExperimentConfig& cfg) {
    if (!cfg.n_per_axis.empty()) return cfg.n_per_axis.front();
    return n_per_axis_for(cfg, cfg.N_list.front());
}

void emit(const json& j, const std::string& path) {
    if (path.empty()) {
        std::cout << j.dump(2) << '\n';
        return;
    }
    std::ofstream os(path);
    if (!os) throw PreconditionError("cannot open " + path + " for writing");
    os << j.dump(2) << '\n';
}

std::ofstream open_csv(const std::string& path) {
    std::ofstream os(path);
    if (!os) throw PreconditionError("cannot open " + path + " for writing");
    return os;
}

int cmd_simulate(const Overrides& o) {
    const ExperimentConfig cfg = load_experiment(o);
    const PointConfiguration config = make_configuration(cfg, first_resolution(cfg));
    const ScalingRegime regime = derive_regime(regime_inputs(cfg, static_cast<long>(config.size())));
    const PlaneWave incident(cfg.direction, Wavenumber(regime.wavenumber()));
    FoldyOptions fopt;
    fopt.method = cfg.method;
    fopt.tol = cfg.foldy_tol;
    FoldySolution sol = solve_foldy(config, regime, incident, fopt);
    sol.config_ref = config.fingerprint();

    const auto pts = sobol_points(cfg.domain.bounding_lo(), cfg.domain.bounding_hi(),
                                  static_cast<std::size_t>(std::max(cfg.samples, 0)));
    // Excluded points can coincide with a center, so only admitted points are evaluated.
    const auto mask = exclusion_mask(config, regime.eps.e2, pts);
    std::vector<Vec3> admitted;
    for (std::size_t i = 0; i < pts.size(); ++i)
        if (!mask[i]) admitted.push_back(pts[i]);
    const auto values = micro_field(config, regime, sol, incident, admitted);
    std::vector<FieldSample> samples;
    std::size_t a = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (mask[i]) {
            samples.push_back({pts[i], Complex(std::nan(""), std::nan("")), true});
        } else {
            samples.push_back(values[a++]);
        }
    }
    if (!o.csv.empty()) {
        auto os = open_csv(o.csv);
        io::write_field_samples_csv(os, samples);
    }
    std::size_t excluded = 0;
    for (const auto& s : samples) excluded += s.inside_exclusion ? 1 : 0;
    emit({{"configuration", {{"N", config.size()}, {"eta", config.eta()}, {"fingerprint", config.fingerprint()}}},
          {"regime", io::to_json(regime)},
          {"solution", io::to_json(sol)},
          {"samples", {{"count", samples.size()}, {"excluded", excluded}}}},
         o.out);
    return kExitOk;
}

int cmd_effective(const Overrides& o, std::optional<double> V_override) {
    const ExperimentConfig cfg = load_experiment(o);
    const double k = cfg.omega * cfg.v;
    double V_inside = 0.0;
    if (V_override) {
        V_inside = *V_override;
    } else {
        const PointConfiguration config = make_configuration(cfg, first_resolution(cfg));
        const ScalingRegime regime = derive_regime(regime_inputs(cfg, static_cast<long>(config.size())));
        V_inside = effective_potential(regime, config).inside_value();
    }
    const Domain domain = cfg.domain;
    const RealField V = [domain, V_inside](const Vec3& x) { return domain.contains(x) ? V_inside : 0.0; };
    const PlaneWave incident(cfg.direction, Wavenumber(k));
    LsOptions lopt;
    lopt.tol = cfg.ls_tol;
    const GridField field = ls_solve(domain, V, incident, Wavenumber(k), cfg.grid_m, lopt);
    const PdeResidual res = pde_residual(field);

    json sidecar = io::grid_field_sidecar(field);
    if (!o.out.empty()) {
        io::write_grid_field(o.out, field);
        std::ofstream(o.out + ".json") << sidecar.dump(2) << '\n';
    }
    const Complex n_eff = effective_index(V_inside, k);
    std::cout << json{{"V_inside", V_inside},
                      {"n_eff", {n_eff.real(), n_eff.imag()}},
                      {"grid", sidecar},
                      {"pde_residual",
                       {{"interior", res.interior}, {"interface", res.interface},
                        {"interior_count", res.interior_count}, {"interface_count", res.interface_count}}}}
                     .dump(2)
              << '\n';
    return kExitOk;
}

struct OracleArgs {
    double V = 0.0;
    double V_imag = 0.0;
    double R = 1.0;
    double k = 1.0;
    int l_max = 0;
    int points = 2000;
    int grid_m = 0;
    std::string out;
    std::string csv;
};

int cmd_oracle(const OracleArgs& a) {
    const Complex V(a.V, a.V_imag);
    const int l_max = a.l_max > 0 ? a.l_max : default_l_max(a.k, a.R);
    const BallSeriesSolution sol = mie_ball_solution(a.R, V, Wavenumber(a.k), l_max);
    const PlaneWave incident(Vec3::UnitZ(), Wavenumber(a.k));

    // Sample the cube of half-width 1.5 R, so the exterior is covered as well.
    const Vec3 half = Vec3::Constant(1.5 * a.R);
    const auto pts = sobol_points(-half, half, static_cast<std::size_t>(std::max(a.points, 1)));
    const auto vals = sol.evaluate(pts);
    double dev = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) dev = std::max(dev, std::abs(vals[i] - incident(pts[i])));

    double surface_max = 0.0;
    for (const auto& p : sobol_points(-Vec3::Ones(), Vec3::Ones(), 4096)) {
        if (p.norm() < 1e-9) continue;
        surface_max = std::max(surface_max, std::abs(sol(a.R * p.normalized())));
    }
    const Complex center = sol(Vec3::Zero());

    json out = io::to_json(sol);
    out["max_deviation_from_incident"] = dev;
    out["center_abs"] = std::abs(center);
    out["surface_max_abs"] = surface_max;
    out["center_to_surface_ratio"] = center == Complex(0.0) ? 0.0 : std::abs(center) / surface_max;

    if (a.grid_m > 0) {
        const Domain ball = Domain::ball(Vec3::Zero(), a.R);
        const double Vr = V.real();
        if (V.imag() != 0.0) throw PreconditionError("grid comparison supports real V only");
        const RealField Vf = [ball, Vr](const Vec3& x) { return ball.contains(x) ? Vr : 0.0; };
        const GridField field = ls_solve(ball, Vf, incident, Wavenumber(a.k), a.grid_m);
        std::vector<Vec3> inner;
        for (const auto& p : pts)
            if (p.norm() <= 0.8 * a.R) inner.push_back(p);
        const auto grid_vals = ls_evaluate(field, inner, incident);
        const auto ref = sol.evaluate(inner);
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < inner.size(); ++i) {
            num = std::max(num, std::abs(grid_vals[i] - ref[i]));
            den = std::max(den, std::abs(ref[i]));
        }
        out["grid_comparison"] = {{"m", a.grid_m}, {"points", inner.size()}, {"relative_linf", num / den},
                                  {"iterations", field.iterations}};
    }

    if (!a.csv.empty()) {
        std::vector<FieldSample> samples;
        for (std::size_t i = 0; i < pts.size(); ++i) samples.push_back({pts[i], vals[i], false});
        auto os = open_csv(a.csv);
        io::write_field_samples_csv(os, samples);
    }
    emit(out, a.out);
    return kExitOk;
}

int cmd_converge(const Overrides& o) {
    const ExperimentConfig cfg = load_experiment(o);
    const ConvergenceReport rep = run_convergence(cfg);
    const ConvergenceVerdict verdict = assess_convergence(rep);
    json j = io::to_json(rep);
    j["verdict"] = {{"amplitude_decreasing", verdict.amplitude_decreasing},
                    {"field_decreasing", verdict.field_decreasing},
                    {"slope_ok", verdict.slope_ok},
                    {"mask_exact", verdict.mask_exact},
                    {"passed", verdict.passed()}};
    if (!o.csv.empty()) {
        auto os = open_csv(o.csv);
        io::write_report_samples_csv(os, rep);
    }
    emit(j, o.out);
    if (o.assert_pass && !verdict.passed()) {
        std::cerr << "convergence assertion failed\n";
        return kExitAssert;
    }
    return kExitOk;
}

int cmd_check_assumptions(const Overrides& o) {
    const ExperimentConfig cfg = load_experiment(o);
    const PointConfiguration config = make_configuration(cfg, first_resolution(cfg));
    const ScalingRegime regime = derive_regime(regime_inputs(cfg, static_cast<long>(config.size())));
    const AssumptionReport rep = check_assumptions(config, regime, default_h_grid(config));
    json j = io::to_json(rep);
    j["N"] = config.size();
    emit(j, o.out);
    if (o.assert_pass && !rep.all_passed()) return kExitAssert;
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Foldy multiple scattering and effective-medium solver for bubbly fluids"};
    app.require_subcommand(1);

    Overrides sim, eff, conv, chk;
    std::optional<double> eff_V;
    OracleArgs orc;

    auto* simulate = app.add_subcommand("simulate", "solve the Foldy system and sample the micro field");
    add_experiment_options(simulate, sim);
    simulate->add_option("--csv", sim.csv, "field samples CSV");

    auto* effective = app.add_subcommand("effective", "solve the effective Lippmann-Schwinger equation");
    add_experiment_options(effective, eff);
    effective->add_option("--V", eff_V, "constant potential inside the domain (overrides the regime)");

    auto* oracle = app.add_subcommand("oracle", "series solution for a constant-potential ball");
    oracle->add_option("--V", orc.V, "potential (real part)");
    oracle->add_option("--V-imag", orc.V_imag, "potential (imaginary part)");
    oracle->add_option("--R", orc.R, "ball radius");
    oracle->add_option("--k", orc.k, "background wavenumber");
    oracle->add_option("--l-max", orc.l_max, "series truncation (default ceil(kR)+12)");
    oracle->add_option("--points", orc.points, "sample points");
    oracle->add_option("--grid-m", orc.grid_m, "also compare against a grid solve at this resolution");
    oracle->add_option("--out", orc.out, "output JSON path");
    oracle->add_option("--csv", orc.csv, "field samples CSV");

    auto* converge = app.add_subcommand("converge", "run the discrete-to-continuum sweep");
    add_experiment_options(converge, conv);
    converge->add_option("--csv", conv.csv, "per-row field samples CSV");
    converge->add_flag("--assert", conv.assert_pass, "exit 3 unless the convergence verdict passes");

    auto* check = app.add_subcommand("check-assumptions", "measure the configuration assumptions");
    add_experiment_options(check, chk);
    check->add_flag("--assert", chk.assert_pass, "exit 3 unless every check passes");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        std::cerr << app.help();
        return kExitInput;
    }

    try {
        if (simulate->parsed()) return cmd_simulate(sim);
        if (effective->parsed()) return cmd_effective(eff, eff_V);
        if (oracle->parsed()) return cmd_oracle(orc);
        if (converge->parsed()) return cmd_converge(conv);
        if (check->parsed()) return cmd_check_assumptions(chk);
    } catch (const ConvergenceError& e) {
        std::cerr << "solver failure: " << e.what() << " (residual " << e.residual() << " after "
                  << e.iterations() << " iterations)\n";
        return kExitSolver;
    } catch (const NearResonantSystemError& e) {
        std::cerr << "solver failure: " << e.what() << '\n';
        return kExitSolver;
    } catch (const TruncationError& e) {
        std::cerr << "solver failure: " << e.what() << '\n';
        return kExitSolver;
    } catch (const SingularEvaluationError& e) {
        std::cerr << "solver failure: " << e.what() << '\n';
        return kExitSolver;
    } catch (const Error& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kExitInput;
    } catch (const io::json::exception& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kExitInput;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kExitInput;
    }
    std::cerr << app.help();
    return kExitInput;
}
