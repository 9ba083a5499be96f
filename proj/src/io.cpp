#include "bubbly/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <ostream>

#include "bubbly/errors.hpp"

namespace bubbly::io {

namespace {

json vec(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

Vec3 vec_from(const json& j) {
    if (!j.is_array() || j.size() != 3) throw PreconditionError("expected a 3-vector");
    return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()};
}

json cplx(Complex z) { return json::array({z.real(), z.imag()}); }

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

} // namespace

json to_json(const Domain& d) {
    if (d.kind() == Domain::Kind::ball)
        return {{"kind", "ball"}, {"center", vec(d.center())}, {"radius", d.radius()}};
    return {{"kind", "box"}, {"lo", vec(d.lo())}, {"hi", vec(d.hi())}};
}

Domain domain_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "ball") {
        const Vec3 c = j.contains("center") ? vec_from(j.at("center")) : Vec3::Zero();
        return Domain::ball(c, j.at("radius").get<double>());
    }
    if (kind == "box") return Domain::box(vec_from(j.at("lo")), vec_from(j.at("hi")));
    throw PreconditionError("unknown domain kind '" + kind + "'");
}

json to_json(const PointConfiguration& c) {
    json centers = json::array();
    for (const auto& y : c.centers()) centers.push_back(vec(y));
    return {{"domain", to_json(c.domain())},
            {"centers", std::move(centers)},
            {"eta", c.eta()},
            {"seed", c.seed()},
            {"generator", to_string(c.generator())}};
}

PointConfiguration configuration_from_json(const json& j) {
    std::vector<Vec3> centers;
    for (const auto& p : j.at("centers")) centers.push_back(vec_from(p));
    const Generator gen = j.contains("generator") ? generator_from_string(j.at("generator").get<std::string>())
                                                  : Generator::custom;
    const std::uint64_t seed = j.value("seed", std::uint64_t{0});
    PointConfiguration cfg(std::move(centers), domain_from_json(j.at("domain")), gen, seed);
    if (j.contains("eta") && cfg.size() >= 2) {
        // The stored eta must still certify the separation of the imported centers.
        if (j.at("eta").get<double>() / std::cbrt(static_cast<double>(cfg.size())) > min_separation(cfg))
            throw PreconditionError("stored eta exceeds the realized separation");
    }
    return cfg;
}

json to_json(const ScalingRegime& r) {
    return {{"N", r.N},
            {"omega", r.omega},
            {"epsilons", {{"e0", r.eps.e0}, {"e1", r.eps.e1}, {"e2", r.eps.e2}}},
            {"Lambda", r.Lambda},
            {"beta0", r.beta0},
            {"shape",
             {{"label", r.shape.label}, {"cap_signed", r.shape.cap_signed}, {"cap_mag", r.shape.cap_mag},
              {"vol", r.shape.vol}}},
            {"tau", r.tau},
            {"v", r.v},
            {"k", r.wavenumber()},
            {"s", r.s},
            {"delta", r.delta},
            {"omega_M", r.omega_M},
            {"gamma", r.gamma},
            {"g", cplx(r.g)},
            {"beta", r.beta},
            {"beta_N", cplx(r.beta_N)},
            {"r_exponent", r.r_exponent},
            {"rate_reading", "e1/(1-e1) - e0/3 used as a decaying exponent"}};
}

json to_json(const FoldySolution& s) {
    json amps = json::array();
    for (Eigen::Index i = 0; i < s.x.size(); ++i) amps.push_back(cplx(s.x[i]));
    return {{"amplitudes", std::move(amps)},
            {"residual_inf", s.residual_inf},
            {"method", to_string(s.method)},
            {"iterations", s.iterations},
            {"seconds", s.seconds},
            {"regime_ref", s.regime_ref},
            {"config_ref", s.config_ref}};
}

json to_json(const BallSeriesSolution& s) {
    json c = json::array(), b = json::array();
    for (const auto& v : s.interior_coefficients()) c.push_back(cplx(v));
    for (const auto& v : s.scattered_coefficients()) b.push_back(cplx(v));
    return {{"radius", s.radius()},
            {"k", s.k()},
            {"V", cplx(s.potential())},
            {"k_in", cplx(s.k_in())},
            {"l_max", s.l_max()},
            {"interior_coefficients", std::move(c)},
            {"scattered_coefficients", std::move(b)},
            {"continuity_residual", s.continuity_residual()}};
}

void write_field_samples_csv(std::ostream& os, const std::vector<FieldSample>& samples) {
    os << "x,y,z,re,im,abs,excluded\n" << std::setprecision(17);
    for (const auto& s : samples)
        os << s.point.x() << ',' << s.point.y() << ',' << s.point.z() << ',' << s.value.real() << ','
           << s.value.imag() << ',' << std::abs(s.value) << ',' << (s.inside_exclusion ? 1 : 0) << '\n';
}

void write_grid_field(const std::string& path, const GridField& field) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw PreconditionError("cannot open " + path + " for writing");
    const Vec3 lo = field.grid.lo();
    const Vec3 hi = lo + Vec3::Constant(field.grid.side());
    const double box[6] = {lo.x(), lo.y(), lo.z(), hi.x(), hi.y(), hi.z()};
    const std::int64_t m = field.grid.m();
    os.write(reinterpret_cast<const char*>(box), sizeof box);
    os.write(reinterpret_cast<const char*>(&m), sizeof m);
    os.write(reinterpret_cast<const char*>(&field.k), sizeof field.k);
    for (const auto& v : field.values) {
        const double pair[2] = {v.real(), v.imag()};
        os.write(reinterpret_cast<const char*>(pair), sizeof pair);
    }
    if (!os) throw PreconditionError("failed writing " + path);
}

GridField read_grid_field(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw PreconditionError("cannot open " + path);
    double box[6];
    std::int64_t m = 0;
    double k = 0.0;
    is.read(reinterpret_cast<char*>(box), sizeof box);
    is.read(reinterpret_cast<char*>(&m), sizeof m);
    is.read(reinterpret_cast<char*>(&k), sizeof k);
    if (!is || m < 1) throw PreconditionError("malformed grid field header in " + path);
    GridField f{VoxelGrid(Vec3(box[0], box[1], box[2]), box[3] - box[0], static_cast<int>(m)), k, {}, {}};
    f.values.resize(f.grid.size());
    for (auto& v : f.values) {
        double pair[2];
        is.read(reinterpret_cast<char*>(pair), sizeof pair);
        v = {pair[0], pair[1]};
    }
    if (!is) throw PreconditionError("truncated grid field data in " + path);
    f.potential.assign(f.grid.size(), 0.0);
    return f;
}

json grid_field_sidecar(const GridField& field) {
    const Vec3 lo = field.grid.lo();
    const Vec3 hi = lo + Vec3::Constant(field.grid.side());
    double vmin = 0.0, vmax = 0.0;
    if (!field.potential.empty()) {
        vmin = *std::min_element(field.potential.begin(), field.potential.end());
        vmax = *std::max_element(field.potential.begin(), field.potential.end());
    }
    return {{"format", "bubbly-grid-v1"},
            {"layout", "header lo[3] hi[3] float64, m int64, k float64; then m^3 (re,im) float64 pairs, x fastest"},
            {"box", {{"lo", vec(lo)}, {"hi", vec(hi)}}},
            {"m", field.grid.m()},
            {"h", field.grid.h()},
            {"k", field.k},
            {"potential_range", {vmin, vmax}},
            {"iterations", field.iterations},
            {"relative_residual", field.relative_residual}};
}

ExperimentConfig experiment_from_json(const json& j) {
    ExperimentConfig c;
    if (j.contains("domain")) c.domain = domain_from_json(j.at("domain"));
    if (j.contains("generator")) c.generator = generator_from_string(j.at("generator").get<std::string>());
    c.jitter = j.value("jitter", c.jitter);
    if (j.contains("n_per_axis")) c.n_per_axis = j.at("n_per_axis").get<std::vector<int>>();
    if (j.contains("N_list")) c.N_list = j.at("N_list").get<std::vector<long>>();
    c.omega = j.value("omega", c.omega);
    if (j.contains("epsilons")) {
        const auto& e = j.at("epsilons");
        if (e.is_array()) {
            if (e.size() != 3) throw PreconditionError("epsilons must have three entries");
            c.eps = {e.at(0).get<double>(), e.at(1).get<double>(), e.at(2).get<double>()};
        } else {
            c.eps = {e.at("e0").get<double>(), e.at("e1").get<double>(), e.at("e2").get<double>()};
        }
    }
    c.Lambda = j.value("Lambda", c.Lambda);
    c.beta0 = j.value("beta0", c.beta0);
    c.tau = j.value("tau", c.tau);
    c.v = j.value("v", c.v);
    if (j.contains("direction")) c.direction = vec_from(j.at("direction"));
    c.grid_m = j.value("grid_m", c.grid_m);
    c.samples = j.value("samples", c.samples);
    c.seed = j.value("seed", c.seed);
    if (j.contains("tolerances")) {
        const auto& t = j.at("tolerances");
        c.foldy_tol = t.value("foldy", c.foldy_tol);
        c.ls_tol = t.value("ls", c.ls_tol);
    }
    if (j.contains("method")) c.method = foldy_method_from_string(j.at("method").get<std::string>());
    return c;
}

json to_json(const ExperimentConfig& c) {
    return {{"domain", to_json(c.domain)},
            {"generator", to_string(c.generator)},
            {"jitter", c.jitter},
            {"n_per_axis", c.n_per_axis},
            {"N_list", c.N_list},
            {"omega", c.omega},
            {"epsilons", {c.eps.e0, c.eps.e1, c.eps.e2}},
            {"Lambda", c.Lambda},
            {"beta0", c.beta0},
            {"tau", c.tau},
            {"v", c.v},
            {"direction", vec(c.direction)},
            {"grid_m", c.grid_m},
            {"samples", c.samples},
            {"seed", c.seed},
            {"tolerances", {{"foldy", c.foldy_tol}, {"ls", c.ls_tol}}},
            {"method", to_string(c.method)}};
}

json to_json(const ConvergenceReport& r) {
    json rows = json::array();
    for (const auto& row : r.rows) {
        rows.push_back({{"n_per_axis", row.n_per_axis},
                        {"N", row.N},
                        {"s", row.s},
                        {"r_N", row.r_N},
                        {"amplitude_error", row.amplitude_error},
                        {"field_error", row.field_error},
                        {"admitted", row.admitted},
                        {"excluded", row.excluded},
                        {"method", row.method},
                        {"iterations", row.iterations},
                        {"residual_inf", row.residual_inf},
                        {"seconds", row.seconds},
                        {"failed", row.failed},
                        {"failure", row.failure}});
    }
    return {{"config", to_json(r.config)},
            {"theoretical_exponent", r.theoretical_exponent},
            {"rate_reading", "min{(1-e0)/6, (1-e2)/3, e2, e1/(1-e1) - e0/3}"},
            {"rows", std::move(rows)},
            {"fitted_slope_amplitude", optional_number(r.fitted_slope_amplitude)},
            {"fitted_slope_field", optional_number(r.fitted_slope_field)},
            {"field_constant", r.field_constant},
            {"effective_solve", {{"iterations", r.ls_iterations}, {"relative_residual", r.ls_residual},
                                 {"seconds", r.ls_seconds}}}};
}

void write_report_samples_csv(std::ostream& os, const ConvergenceReport& r) {
    os << "N,x,y,z,re_micro,im_micro,re_eff,im_eff,abs_err,excluded\n" << std::setprecision(17);
    for (const auto& s : r.samples) {
        os << s.N << ',' << s.point.x() << ',' << s.point.y() << ',' << s.point.z() << ',';
        if (s.excluded) {
            os << ",,";
        } else {
            os << s.micro.real() << ',' << s.micro.imag() << ',';
        }
        os << s.effective.real() << ',' << s.effective.imag() << ',';
        if (!s.excluded) os << s.abs_err;
        os << ',' << (s.excluded ? 1 : 0) << '\n';
    }
}

json to_json(const AssumptionReport& r) {
    json checks = json::array();
    for (const auto& c : r.checks)
        checks.push_back({{"name", c.name}, {"passed", c.passed}, {"measured", c.measured}, {"detail", c.detail}});
    return {{"checks", std::move(checks)}, {"all_passed", r.all_passed()}};
}

json read_json_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw PreconditionError("cannot open " + path);
    try {
        return json::parse(is);
    } catch (const json::exception& e) {
        throw PreconditionError("invalid JSON in " + path + ": " + e.what());
    }
}

} // namespace bubbly::io
