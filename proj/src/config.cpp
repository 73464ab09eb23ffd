#include "satfront/config.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"

namespace satfront {

namespace {

using OrderedJson = nlohmann::ordered_json;

OrderedJson parse_document(const std::string& text) {
  try {
    return OrderedJson::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
}

double require_number(const OrderedJson& node, const char* key) {
  if (!node.contains(key))
    throw ConfigError(std::string("missing required key \"") + key + "\"");
  const auto& v = node.at(key);
  if (!v.is_number())
    throw ConfigError(std::string("key \"") + key + "\" must be a number");
  return v.get<double>();
}

BistableReaction reaction_from_node(const OrderedJson& node) {
  if (!node.is_object()) throw ConfigError("reaction config must be an object");
  std::string type = node.value("type", std::string());
  if (type == "cubic") return build_cubic(require_number(node, "a"));
  if (type == "table") {
    double alpha = require_number(node, "alpha");
    if (!node.contains("samples") || !node.at("samples").is_array())
      throw ConfigError("table reaction needs a \"samples\" array");
    std::vector<double> s, f;
    for (const auto& pair : node.at("samples")) {
      if (!pair.is_array() || pair.size() != 2 || !pair.at(0).is_number() ||
          !pair.at(1).is_number())
        throw ConfigError("each sample must be a [s, f] pair of numbers");
      s.push_back(pair.at(0).get<double>());
      f.push_back(pair.at(1).get<double>());
    }
    return build_from_table(s, f, alpha);
  }
  throw ConfigError("unknown reaction type \"" + type +
                    "\" (expected \"cubic\" or \"table\")");
}

SaturatingFlux flux_from_node(const OrderedJson& node) {
  if (!node.is_object()) throw ConfigError("flux config must be an object");
  std::string type = node.value("type", std::string());
  if (type == "mean_curvature") return mean_curvature_flux();
  if (type == "power")
    return power_saturating_flux(require_number(node, "m"),
                                 require_number(node, "delta"));
  throw ConfigError("unknown flux type \"" + type +
                    "\" (expected \"mean_curvature\" or \"power\")");
}

OrderedJson number_or_null(double x) {
  if (std::isfinite(x)) return x;
  return nullptr;
}

const char* direction_name(Direction d) {
  return d == Direction::Forward ? "forward" : "backward";
}

const char* event_name(TerminalEvent::Kind k) {
  switch (k) {
    case TerminalEvent::Kind::HitZero: return "hit_zero";
    case TerminalEvent::Kind::BlowUp: return "blow_up";
    case TerminalEvent::Kind::ReachedEndpoint: return "reached_endpoint";
  }
  return "unknown";
}

const char* speed_kind_name(SpeedKind k) {
  return k == SpeedKind::BistableStar ? "bistable_star" : "monostable_plus";
}

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::RegularFront: return "regular_front";
    case Regime::BorderSteadyState: return "border_steady_state";
    case Regime::DiscontinuousSteadyState: return "discontinuous_steady_state";
  }
  return "unknown";
}

const char* profile_kind_name(ProfileKind k) {
  switch (k) {
    case ProfileKind::RegularFront: return "regular_front";
    case ProfileKind::DiscontinuousSteady: return "discontinuous_steady";
    case ProfileKind::BorderSteady: return "border_steady";
    case ProfileKind::Nonmonotone: return "nonmonotone";
    case ProfileKind::Inviscid: return "inviscid";
  }
  return "unknown";
}

// nlohmann prints doubles at full precision already; dump on one line.
std::string dump(const OrderedJson& j) { return j.dump() + "\n"; }

}  // namespace

BistableReaction reaction_from_json(const std::string& text) {
  return reaction_from_node(parse_document(text));
}

SaturatingFlux flux_from_json(const std::string& text) {
  return flux_from_node(parse_document(text));
}

ModelConfig model_from_json(const std::string& text) {
  OrderedJson doc = parse_document(text);
  if (!doc.is_object()) throw ConfigError("config document must be an object");
  ModelConfig cfg = default_model();
  if (doc.contains("reaction")) cfg.reaction = reaction_from_node(doc.at("reaction"));
  if (doc.contains("flux")) cfg.flux = flux_from_node(doc.at("flux"));
  return cfg;
}

ModelConfig default_model() {
  return ModelConfig{build_cubic(0.4), mean_curvature_flux()};
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::Domain: return "domain";
    case ErrorCode::Validation: return "validation";
    case ErrorCode::Quadrature: return "quadrature";
    case ErrorCode::Seed: return "seed";
    case ErrorCode::Step: return "step";
    case ErrorCode::Bracket: return "bracket";
    case ErrorCode::LinearBound: return "linear_bound";
    case ErrorCode::Regime: return "regime";
    case ErrorCode::Window: return "window";
    case ErrorCode::Config: return "config";
  }
  return "unknown";
}

std::string error_json(ErrorCode code, const std::string& message) {
  OrderedJson j;
  j["error"]["code"] = error_code_name(code);
  j["error"]["message"] = message;
  return dump(j);
}

std::string trajectory_csv(const ReducedTrajectory& traj) {
  std::string out = "v,y\n";
  for (const auto& s : traj.samples)
    out += format_double(s.v) + "," + format_double(s.y) + "\n";
  return out;
}

std::string trajectory_sidecar_json(const ReducedTrajectory& traj) {
  OrderedJson j;
  j["anchor"] = traj.anchor;
  j["direction"] = direction_name(traj.direction);
  j["event"] = event_name(traj.event.kind);
  j["event_location"] = traj.event.v;
  j["eps"] = traj.eps;
  j["c"] = traj.speed_c;
  j["tolerances"]["abs"] = traj.abs_tol;
  j["tolerances"]["rel"] = traj.rel_tol;
  return dump(j);
}

std::string speed_json(const SpeedResult& result) {
  OrderedJson j;
  j["kind"] = speed_kind_name(result.kind);
  j["eps"] = result.eps;
  j["value"] = result.value;
  j["bracket"] = {result.bracket_low, result.bracket_high};
  j["regime"] = regime_name(result.regime);
  j["iterations"] = result.iterations;
  j["tol"] = result.tol;
  return dump(j);
}

std::string profile_csv(const WaveProfile& profile) {
  std::string out = "z,v,piece_index,monotonicity\n";
  for (size_t p = 0; p < profile.pieces.size(); ++p) {
    const ProfilePiece& piece = profile.pieces[p];
    const char* mono = piece.increasing ? "1" : "-1";
    for (size_t i = 0; i < piece.z.size(); ++i)
      out += format_double(piece.z[i]) + "," + format_double(piece.v[i]) +
             "," + std::to_string(p) + "," + mono + "\n";
  }
  return out;
}

std::string profile_sidecar_json(const WaveProfile& profile,
                                 const ResidualReport* residual) {
  OrderedJson j;
  j["kind"] = profile_kind_name(profile.kind);
  j["eps"] = number_or_null(profile.eps);
  j["speed"] = profile.speed_c;
  j["normalization"] = profile.normalization;
  if (profile.has_jump) {
    j["jump"]["v_minus"] = profile.v_minus;
    j["jump"]["v_plus"] = profile.v_plus;
  } else {
    j["jump"] = nullptr;
  }
  j["junctions"] = OrderedJson::array();
  for (const auto& [zj, vj] : profile.junctions)
    j["junctions"].push_back({zj, vj});
  if (residual) {
    j["residual"]["sup"] = residual->sup;
    j["residual"]["at_z"] = residual->at_z;
    j["residual"]["points"] = residual->n;
  } else {
    j["residual"] = nullptr;
  }
  return dump(j);
}

std::string report_csv(const ConvergenceReport& report) {
  std::string out = "eps,value\n";
  for (const auto& row : report.rows)
    out += format_double(row.eps) + "," + format_double(row.value) + "\n";
  return out;
}

std::string report_header_json(const ConvergenceReport& report,
                               const std::string& metric, double target) {
  OrderedJson j;
  j["metric"] = metric;
  j["target"] = number_or_null(target);
  OrderedJson eps = OrderedJson::array();
  for (const auto& row : report.rows) eps.push_back(row.eps);
  j["grids"]["eps"] = eps;
  if (report.grid_points > 0) {
    j["grids"]["z"]["exclusion"] = report.exclusion;
    j["grids"]["z"]["half_width"] = report.half_width;
    j["grids"]["z"]["points"] = report.grid_points;
  } else {
    j["grids"]["z"] = nullptr;
  }
  return dump(j);
}

}  // namespace satfront
