#pragma once

// Declarative JSON model configs plus the fixed-format serializers shared by
// the shared-library API and the command line tool. All emitters are
// deterministic: same input, same bytes, no timestamps.

#include <string>
#include <vector>

#include "satfront/errors.hpp"
#include "satfront/flux.hpp"
#include "satfront/limits.hpp"
#include "satfront/profiles.hpp"
#include "satfront/reaction.hpp"
#include "satfront/reduced_ode.hpp"
#include "satfront/shooting.hpp"

namespace satfront {

// {"type":"cubic","a":0.4}
// {"type":"table","alpha":0.4,"samples":[[s,f],...]}
BistableReaction reaction_from_json(const std::string& text);

// {"type":"mean_curvature"}
// {"type":"power","m":2,"delta":1}
SaturatingFlux flux_from_json(const std::string& text);

struct ModelConfig {
  BistableReaction reaction;
  SaturatingFlux flux;
};

// Combined document {"reaction":{...},"flux":{...}}; either key may be
// omitted and falls back to the cubic a=0.4 / mean curvature defaults.
ModelConfig model_from_json(const std::string& text);
ModelConfig default_model();

// 17 significant digits; round-trips every finite double losslessly.
std::string format_double(double x);

std::string error_code_name(ErrorCode code);
// {"error":{"code":...,"message":...}} on a single line.
std::string error_json(ErrorCode code, const std::string& message);

// Reduced-plane trajectory: CSV columns v,y plus a sidecar carrying the run
// parameters {anchor, direction, event, event_location, eps, c, tolerances}.
std::string trajectory_csv(const ReducedTrajectory& traj);
std::string trajectory_sidecar_json(const ReducedTrajectory& traj);

// {kind, eps, value, bracket, regime, iterations, tol}
std::string speed_json(const SpeedResult& result);

// Profile: CSV columns z,v,piece_index,monotonicity (+1 increasing, -1
// decreasing) plus a sidecar {kind, eps, speed, normalization, jump,
// junctions, residual}.
std::string profile_csv(const WaveProfile& profile);
std::string profile_sidecar_json(const WaveProfile& profile,
                                 const ResidualReport* residual = nullptr);

// Convergence report: CSV columns eps,value plus a header JSON
// {metric, target, grids}; pass NaN as target to emit null.
std::string report_csv(const ConvergenceReport& report);
std::string report_header_json(const ConvergenceReport& report,
                               const std::string& metric, double target);

}  // namespace satfront
