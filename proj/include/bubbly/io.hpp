#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "bubbly/effective.hpp"
#include "bubbly/foldy.hpp"
#include "bubbly/geometry.hpp"
#include "bubbly/harness.hpp"
#include "bubbly/mie.hpp"
#include "bubbly/physics.hpp"

namespace bubbly::io {

using json = nlohmann::json;

json to_json(const Domain& d);
Domain domain_from_json(const json& j);

/// {"domain", "centers", "eta", "seed", "generator"}; doubles round-trip exactly.
json to_json(const PointConfiguration& c);
PointConfiguration configuration_from_json(const json& j);

/// Every input and derived field, so downstream runs need no re-derivation.
json to_json(const ScalingRegime& r);

/// Amplitudes as [re, im] pairs plus residual, method, iterations and timing.
json to_json(const FoldySolution& s);

json to_json(const BallSeriesSolution& s);

/// CSV with columns x,y,z,re,im,abs,excluded.
void write_field_samples_csv(std::ostream& os, const std::vector<FieldSample>& samples);

/// Flat binary: lo[3], hi[3] (doubles), m (int64), k (double), then m^3 (re, im) pairs, x fastest.
void write_grid_field(const std::string& path, const GridField& field);
GridField read_grid_field(const std::string& path);
json grid_field_sidecar(const GridField& field);

ExperimentConfig experiment_from_json(const json& j);
json to_json(const ExperimentConfig& cfg);

/// Report JSON. Timing lives under keys named "seconds"/"*_seconds" only.
json to_json(const ConvergenceReport& r);

/// CSV with columns N,x,y,z,re_micro,im_micro,re_eff,im_eff,abs_err,excluded.
void write_report_samples_csv(std::ostream& os, const ConvergenceReport& r);

json to_json(const AssumptionReport& r);

json read_json_file(const std::string& path);

} // namespace bubbly::io
