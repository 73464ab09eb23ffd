// Command line front-end; talks to the solver through the C interface only.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "satfront.h"
#include "svg.hpp"

namespace fs = std::filesystem;

namespace {

struct Ctx {
  sf_reaction* reaction = nullptr;
  sf_flux* flux = nullptr;
  fs::path out_dir;
  bool plot = false;
};

std::string escape_json(const std::string& s) {
  std::string out;
  for (unsigned char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (ch < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", ch);
          out += buf;
        } else {
          out += static_cast<char>(ch);
        }
    }
  }
  return out;
}

[[noreturn]] void die(sf_status st, const std::string& message) {
  std::fprintf(stderr, "{\"error\":{\"code\":\"%s\",\"message\":\"%s\"}}\n",
               sf_status_name(st), escape_json(message).c_str());
  std::exit(static_cast<int>(st));
}

void check(sf_status st) {
  if (st != SF_OK) die(st, sf_last_error());
}

std::string take(char* s) {
  std::string out = s ? s : "";
  sf_string_free(s);
  return out;
}

std::string gstr(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%g", x);
  return buf;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) die(SF_ERR_INTERNAL, "cannot open " + path.string() + " for writing");
  out << content;
  if (!out) die(SF_ERR_INTERNAL, "failed writing " + path.string());
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) die(SF_ERR_CONFIG, "cannot read config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// --- profile helpers -------------------------------------------------------

struct PieceData {
  std::vector<double> z, v, dvdz;
  int increasing = 1;
};

std::vector<PieceData> fetch_pieces(const sf_profile* p) {
  size_t n = 0;
  check(sf_profile_num_pieces(p, &n));
  std::vector<PieceData> out(n);
  for (size_t i = 0; i < n; ++i) {
    size_t m = 0;
    check(sf_profile_piece_size(p, i, &m));
    out[i].z.resize(m);
    out[i].v.resize(m);
    out[i].dvdz.resize(m);
    check(sf_profile_piece_copy(p, i, out[i].z.data(), out[i].v.data(),
                                out[i].dvdz.data(), m, &out[i].increasing));
  }
  return out;
}

void add_profile_series(svgplot::Figure& fig, const sf_profile* p,
                        const std::string& label) {
  auto pieces = fetch_pieces(p);
  for (size_t i = 0; i < pieces.size(); ++i)
    fig.add(pieces[i].z, pieces[i].v, i == 0 ? label : "");
}

// right-hand panel in the figure style: y = eps Q(|v'|) against v
void add_plane_series(svgplot::Figure& fig, const Ctx& ctx, const sf_profile* p,
                      const std::string& label) {
  double eps = 0.0;
  check(sf_profile_info(p, nullptr, &eps, nullptr, nullptr, nullptr, nullptr,
                        nullptr));
  auto pieces = fetch_pieces(p);
  for (size_t i = 0; i < pieces.size(); ++i) {
    std::vector<double> y(pieces[i].v.size());
    for (size_t k = 0; k < y.size(); ++k) {
      double q = 0.0;
      check(sf_flux_eval(ctx.flux, std::abs(pieces[i].dvdz[k]), nullptr, &q));
      y[k] = eps * q;
    }
    fig.add(pieces[i].v, y, i == 0 ? label : "");
  }
}

void emit_profile_files(const Ctx& ctx, const std::string& base,
                        const sf_profile* p, bool with_residual) {
  char* csv = nullptr;
  check(sf_profile_csv(p, &csv));
  write_file(ctx.out_dir / (base + ".csv"), take(csv));
  char* side = nullptr;
  check(sf_profile_sidecar_json(p, ctx.reaction, ctx.flux,
                                with_residual ? 1 : 0, &side));
  write_file(ctx.out_dir / (base + ".json"), take(side));
}

bool profile_is_continuous(const sf_profile* p) {
  int jump = 0;
  check(sf_profile_info(p, nullptr, nullptr, nullptr, nullptr, &jump, nullptr,
                        nullptr));
  return jump == 0;
}

// --- grids -----------------------------------------------------------------

std::vector<double> parse_eps_grid(const std::string& spec) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : spec) {
    if (ch == ':') { parts.push_back(cur); cur.clear(); }
    else cur += ch;
  }
  parts.push_back(cur);
  if ((parts.size() != 3 && parts.size() != 4) || parts.back() != "log")
    die(SF_ERR_CONFIG,
        "eps grid must be lo:hi:log or lo:hi:count:log, got \"" + spec + "\"");
  double lo = 0, hi = 0;
  long n = 9;
  try {
    lo = std::stod(parts[0]);
    hi = std::stod(parts[1]);
    if (parts.size() == 4) n = std::stol(parts[2]);
  } catch (const std::exception&) {
    die(SF_ERR_CONFIG, "cannot parse eps grid \"" + spec + "\"");
  }
  if (!(lo > 0.0) || !(hi > 0.0))
    die(SF_ERR_CONFIG, "eps grid endpoints must be positive");
  if (n < 2) die(SF_ERR_CONFIG, "eps grid needs at least two points");
  std::vector<double> out(n);
  for (long i = 0; i < n; ++i)
    out[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

const std::vector<double> kBistableGrid = {0.1, 0.01, 0.008, 0.005, 0.001, 0.0005};
const std::vector<double> kMonostableGrid = {0.5, 0.25, 0.125, 0.05, 0.01};

// --- commands --------------------------------------------------------------

void run_speed(const Ctx& ctx, const std::string& kind, double eps, double tol,
               bool empirical) {
  sf_speed_result res;
  if (kind == "bistable")
    check(sf_speed_bistable(ctx.reaction, ctx.flux, eps, tol, &res));
  else if (empirical)
    check(sf_speed_monostable_shooting(ctx.reaction, ctx.flux, eps, tol, &res));
  else
    check(sf_speed_monostable(ctx.reaction, ctx.flux, eps, 0, &res));
  char* json = nullptr;
  check(sf_speed_result_json(&res, &json));
  std::string text = take(json);
  write_file(ctx.out_dir / ("speed_" + kind + "_eps" + gstr(eps) + ".json"),
             text);
  std::fputs(text.c_str(), stdout);
}

void run_front(const Ctx& ctx, const std::vector<double>& eps_list,
               const std::string& side, double c) {
  svgplot::Figure fig_v, fig_y;
  fig_v.title = "profiles v(z)";
  fig_v.x_label = "z";
  fig_y.title = "reduced plane y(v)";
  fig_y.x_label = "v";
  std::string tag = c > 0.0 ? "monostable" : side;
  for (double eps : eps_list) {
    sf_profile* p = nullptr;
    if (c > 0.0)
      check(sf_profile_monostable_front(ctx.reaction, ctx.flux, eps, c, &p));
    else if (side == "monostable")
      check(sf_profile_monostable_front(ctx.reaction, ctx.flux, eps, 0.0, &p));
    else
      check(sf_profile_bistable_front(ctx.reaction, ctx.flux, eps, 0.0, &p));
    emit_profile_files(ctx, "front_" + tag + "_eps" + gstr(eps), p, true);
    if (ctx.plot) {
      add_profile_series(fig_v, p, "eps=" + gstr(eps));
      add_plane_series(fig_y, ctx, p, "eps=" + gstr(eps));
    }
    sf_profile_destroy(p);
  }
  if (ctx.plot)
    write_file(ctx.out_dir / ("front_" + tag + ".svg"),
               svgplot::render_row({fig_v, fig_y}));
}

void run_steady(const Ctx& ctx, const std::vector<double>& eps_list) {
  svgplot::Figure fig_v, fig_y;
  fig_v.title = "steady states v(z)";
  fig_v.x_label = "z";
  fig_y.title = "reduced plane y(v)";
  fig_y.x_label = "v";
  for (double eps : eps_list) {
    sf_profile* p = nullptr;
    check(sf_profile_steady(ctx.reaction, ctx.flux, eps, &p));
    emit_profile_files(ctx, "steady_eps" + gstr(eps), p, false);
    if (ctx.plot) {
      add_profile_series(fig_v, p, "eps=" + gstr(eps));
      add_plane_series(fig_y, ctx, p, "eps=" + gstr(eps));
    }
    sf_profile_destroy(p);
  }
  if (ctx.plot)
    write_file(ctx.out_dir / "steady.svg", svgplot::render_row({fig_v, fig_y}));
}

void run_nonmonotone(const Ctx& ctx, double eps, double c, int turns,
                     const std::string& start) {
  bool from_one = start == "one" || (start == "auto" && c != 0.0);
  sf_profile* p = nullptr;
  check(sf_profile_nonmonotone(ctx.reaction, ctx.flux, eps, c,
                               from_one ? 1 : 0, turns, &p));
  std::string base = "nonmonotone_eps" + gstr(eps) + "_c" + gstr(c);
  emit_profile_files(ctx, base, p, true);
  if (ctx.plot) {
    svgplot::Figure fig;
    fig.title = "nonmonotone wave v(z)";
    fig.x_label = "z";
    add_profile_series(fig, p, "eps=" + gstr(eps) + " c=" + gstr(c));
    write_file(ctx.out_dir / (base + ".svg"), svgplot::render(fig));
  }
  sf_profile_destroy(p);
}

void run_inviscid(const Ctx& ctx, double c, double q1, double q2) {
  sf_profile* p = nullptr;
  check(sf_profile_inviscid(ctx.reaction, c, q1, q2, &p));
  std::string base = "inviscid_c" + gstr(c);
  emit_profile_files(ctx, base, p, true);
  if (ctx.plot) {
    svgplot::Figure fig;
    fig.title = "inviscid front v(z)";
    fig.x_label = "z";
    add_profile_series(fig, p, "c=" + gstr(c));
    write_file(ctx.out_dir / (base + ".svg"), svgplot::render(fig));
  }
  sf_profile_destroy(p);
}

void plot_report(const Ctx& ctx, const std::string& base, const sf_report* rep,
                 const std::string& metric) {
  size_t n = 0;
  check(sf_report_size(rep, &n));
  std::vector<double> x(n), y(n);
  for (size_t i = 0; i < n; ++i) {
    check(sf_report_row(rep, i, &x[i], &y[i]));
    x[i] = std::log10(x[i]);
  }
  svgplot::Figure fig;
  fig.title = metric + " vs eps";
  fig.x_label = "log10(eps)";
  fig.add(x, y, metric);
  write_file(ctx.out_dir / (base + ".svg"), svgplot::render(fig));
}

void emit_report(const Ctx& ctx, const std::string& base, const sf_report* rep,
                 const std::string& metric, double target) {
  char* csv = nullptr;
  check(sf_report_csv(rep, &csv));
  write_file(ctx.out_dir / (base + ".csv"), take(csv));
  char* header = nullptr;
  check(sf_report_header_json(rep, metric.c_str(), target, &header));
  write_file(ctx.out_dir / (base + ".json"), take(header));
  if (ctx.plot) plot_report(ctx, base, rep, metric);
}

void run_sweep(const Ctx& ctx, const std::string& metric,
               const std::string& which, std::vector<double> grid,
               double exclusion, double half_width, long points,
               double psi_width, double c, double tol, bool empirical) {
  int side = which == "monostable" ? SF_SIDE_MONOSTABLE : SF_SIDE_BISTABLE;
  if (grid.empty()) {
    if (metric == "speed")
      grid = parse_eps_grid("0.5:0.009:9:log");
    else if (metric == "energy")
      grid = {0.05, 0.01};
    else if (metric == "fixed")
      grid = {0.04, 0.02, 0.01, 0.005};
    else
      grid = side == SF_SIDE_MONOSTABLE ? kMonostableGrid : kBistableGrid;
  }
  sf_report* rep = nullptr;
  std::string base = "sweep_" + metric;
  double target = 0.0;
  if (metric == "speed") {
    base += "_" + which;
    target = std::nan("");
    check(sf_report_speed_sweep(ctx.reaction, ctx.flux, side, empirical ? 1 : 0,
                                grid.data(), grid.size(), tol, &rep));
  } else if (metric == "step") {
    base += "_" + which;
    check(sf_report_step(ctx.reaction, ctx.flux, side, grid.data(),
                         grid.size(), exclusion, half_width, points, 0.0,
                         &rep));
  } else if (metric == "pairing") {
    base += "_" + which;
    check(sf_report_pairing(ctx.reaction, ctx.flux, side, psi_width,
                            grid.data(), grid.size(), &target, &rep));
  } else if (metric == "fixed") {
    if (!(c > 0.0)) die(SF_ERR_CONFIG, "--metric fixed requires --c > 0");
    base += "_c" + gstr(c);
    check(sf_report_fixed_speed(ctx.reaction, ctx.flux, c, grid.data(),
                                grid.size(), half_width, points, &rep));
  } else if (metric == "energy") {
    check(sf_report_energy(ctx.reaction, ctx.flux, grid.data(), grid.size(),
                           0.0, &rep));
  } else {
    die(SF_ERR_CONFIG, "unknown metric \"" + metric + "\"");
  }
  emit_report(ctx, base, rep, metric, target);
  sf_report_destroy(rep);

  if (metric == "step") {
    // reproduction bundle: the underlying profiles, one file pair per eps,
    // plus the overlay figure
    svgplot::Figure fig_v, fig_y;
    fig_v.title = "critical profiles v(z)";
    fig_v.x_label = "z";
    fig_y.title = "reduced plane y(v)";
    fig_y.x_label = "v";
    for (double eps : grid) {
      sf_profile* p = nullptr;
      if (side == SF_SIDE_MONOSTABLE) {
        check(sf_profile_monostable_front(ctx.reaction, ctx.flux, eps, 0.0, &p));
      } else {
        sf_status st =
            sf_profile_bistable_front(ctx.reaction, ctx.flux, eps, 0.0, &p);
        if (st == SF_ERR_REGIME)
          check(sf_profile_steady(ctx.reaction, ctx.flux, eps, &p));
        else
          check(st);
      }
      emit_profile_files(ctx, base + "_eps" + gstr(eps), p,
                         profile_is_continuous(p));
      if (ctx.plot) {
        add_profile_series(fig_v, p, "eps=" + gstr(eps));
        add_plane_series(fig_y, ctx, p, "eps=" + gstr(eps));
      }
      sf_profile_destroy(p);
    }
    if (ctx.plot)
      write_file(ctx.out_dir / (base + "_profiles.svg"),
                 svgplot::render_row({fig_v, fig_y}));
  }
}

void run_shoot(const Ctx& ctx, double eps, double c, double anchor,
               double stop, bool backward) {
  sf_trajectory* t = nullptr;
  check(sf_shoot(ctx.reaction, ctx.flux, eps, c, anchor,
                 backward ? SF_BACKWARD : SF_FORWARD, stop, 0.0, 0.0, &t));
  std::string base = "shoot_eps" + gstr(eps) + "_c" + gstr(c) +
                     (backward ? "_bwd" : "_fwd");
  char* csv = nullptr;
  check(sf_trajectory_csv(t, &csv));
  write_file(ctx.out_dir / (base + ".csv"), take(csv));
  char* side = nullptr;
  check(sf_trajectory_sidecar_json(t, &side));
  write_file(ctx.out_dir / (base + ".json"), take(side));
  sf_trajectory_destroy(t);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"traveling fronts for bistable equations with saturating diffusion"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  bool plot = false;
  app.add_option("--config", config_path,
                 "JSON file selecting reaction and flux");
  app.add_option("--out-dir", out_dir, "output directory")
      ->envname("SATFRONT_OUT_DIR");
  app.add_flag("--plot", plot, "also emit SVG figures");

  auto* speed = app.add_subcommand("speed", "critical wave speed");
  std::string speed_kind;
  double speed_eps = 0.0, speed_tol = 0.0;
  bool speed_empirical = false;
  speed->add_option("--kind", speed_kind, "bistable | monostable")
      ->required()
      ->check(CLI::IsMember({"bistable", "monostable"}));
  speed->add_option("--eps", speed_eps, "diffusion scale")->required();
  speed->add_option("--tol", speed_tol, "bisection tolerance");
  speed->add_flag("--empirical", speed_empirical,
                  "monostable: bisection instead of the closed form");

  auto* front = app.add_subcommand("front", "traveling front profile");
  std::vector<double> front_eps;
  std::string front_side = "bistable";
  double front_c = 0.0;
  front->add_option("--eps", front_eps, "diffusion scale (repeatable)")
      ->required();
  front->add_option("--critical", front_side, "bistable | monostable")
      ->check(CLI::IsMember({"bistable", "monostable"}));
  front->add_option("--c", front_c,
                    "explicit supercritical speed (monostable side)");

  auto* steady = app.add_subcommand("steady", "discontinuous steady state");
  std::vector<double> steady_eps;
  steady->add_option("--eps", steady_eps, "diffusion scale (repeatable)")
      ->required();

  auto* nonmono = app.add_subcommand("nonmonotone", "glued oscillating wave");
  double nm_eps = 0.0, nm_c = 0.0;
  int nm_turns = 6;
  std::string nm_start = "auto";
  nonmono->add_option("--eps", nm_eps, "diffusion scale")->required();
  nonmono->add_option("--c", nm_c, "wave speed")->required();
  nonmono->add_option("--turns", nm_turns, "maximum direction changes");
  nonmono->add_option("--start", nm_start, "auto | one | zero")
      ->check(CLI::IsMember({"auto", "one", "zero"}));

  auto* inviscid = app.add_subcommand("inviscid", "zero-diffusion front");
  double iv_c = 0.0;
  double iv_q1 = std::nan(""), iv_q2 = std::nan("");
  inviscid->add_option("--c", iv_c, "wave speed (nonzero)")->required();
  inviscid->add_option("--q1", iv_q1, "left equilibrium");
  inviscid->add_option("--q2", iv_q2, "right equilibrium");

  auto* sweep = app.add_subcommand("sweep", "convergence and speed sweeps");
  std::string sw_metric = "step", sw_which = "bistable", sw_grid_spec;
  std::vector<double> sw_eps;
  double sw_exclusion = 0.5, sw_half_width = 50.0, sw_psi = 1.0,
         sw_c = 0.0, sw_tol = 0.0;
  long sw_points = 2001;
  bool sw_empirical = false;
  sweep->add_option("--metric", sw_metric,
                    "speed | step | pairing | fixed | energy");
  sweep->add_option("--which", sw_which, "bistable | monostable")
      ->check(CLI::IsMember({"bistable", "monostable"}));
  sweep->add_option("--eps-grid", sw_grid_spec, "lo:hi[:count]:log");
  sweep->add_option("--eps", sw_eps, "explicit eps list (repeatable)");
  sweep->add_option("--exclusion", sw_exclusion,
                    "half-width of the interval skipped around z=0");
  sweep->add_option("--half-width", sw_half_width, "evaluation window");
  sweep->add_option("--points", sw_points, "evaluation grid size");
  sweep->add_option("--psi-width", sw_psi, "bump test function width");
  sweep->add_option("--c", sw_c, "fixed speed (metric fixed)");
  sweep->add_option("--tol", sw_tol, "speed tolerance");
  sweep->add_flag("--empirical", sw_empirical,
                  "metric speed, monostable side: bisection");

  auto* shoot_cmd = app.add_subcommand("shoot", "raw reduced-plane trajectory");
  double sh_eps = 0.0, sh_c = 0.0, sh_anchor = 0.0, sh_stop = 1.0;
  bool sh_backward = false;
  shoot_cmd->add_option("--eps", sh_eps, "diffusion scale")->required();
  shoot_cmd->add_option("--c", sh_c, "wave speed")->required();
  shoot_cmd->add_option("--anchor", sh_anchor, "departure equilibrium");
  shoot_cmd->add_option("--stop", sh_stop, "target value of v");
  shoot_cmd->add_flag("--backward", sh_backward, "integrate toward smaller v");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    die(SF_ERR_CONFIG, e.what());
  }

  Ctx ctx;
  ctx.plot = plot;
  ctx.out_dir = out_dir;
  std::error_code ec;
  fs::create_directories(ctx.out_dir, ec);
  if (ec && !fs::is_directory(ctx.out_dir))
    die(SF_ERR_INTERNAL, "cannot create output directory " + out_dir);

  std::string model_json =
      config_path.empty() ? std::string() : read_file(config_path);
  check(sf_model_from_json(model_json.empty() ? nullptr : model_json.c_str(),
                           &ctx.reaction, &ctx.flux));

  if (*speed) {
    run_speed(ctx, speed_kind, speed_eps, speed_tol, speed_empirical);
  } else if (*front) {
    run_front(ctx, front_eps, front_side, front_c);
  } else if (*steady) {
    run_steady(ctx, steady_eps);
  } else if (*nonmono) {
    run_nonmonotone(ctx, nm_eps, nm_c, nm_turns, nm_start);
  } else if (*inviscid) {
    run_inviscid(ctx, iv_c, iv_q1, iv_q2);
  } else if (*sweep) {
    if (!sw_eps.empty() && !sw_grid_spec.empty())
      die(SF_ERR_CONFIG, "use either --eps or --eps-grid, not both");
    std::vector<double> grid =
        !sw_eps.empty() ? sw_eps
                        : (sw_grid_spec.empty() ? std::vector<double>{}
                                                : parse_eps_grid(sw_grid_spec));
    run_sweep(ctx, sw_metric, sw_which, grid, sw_exclusion, sw_half_width,
              sw_points, sw_psi, sw_c, sw_tol, sw_empirical);
  } else if (*shoot_cmd) {
    run_shoot(ctx, sh_eps, sh_c, sh_anchor, sh_stop, sh_backward);
  }

  sf_reaction_destroy(ctx.reaction);
  sf_flux_destroy(ctx.flux);
  return 0;
}
