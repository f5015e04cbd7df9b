// semiwave: critical speeds, semi-wavefront profiles, and persistence
// diagnostics for monostable nonlocal evolution equations.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <sstream>
#include <fstream>
#include <algorithm>
#include <vector>

#include "CLI11.hpp"
#include "semiwave/characteristic.hpp"
#include "semiwave/config.hpp"
#include "semiwave/evolve.hpp"
#include "semiwave/gmap.hpp"
#include "semiwave/jsonio.hpp"
#include "semiwave/profile.hpp"
#include "semiwave/speeds.hpp"

namespace fs = std::filesystem;
using namespace semiwave;

namespace {

struct Common {
  std::string config_path;
  std::vector<std::string> overrides;  // section.key=value
};

RunConfig load(const Common& c, std::map<std::string, std::string> extra = {}) {
  std::map<std::string, std::string> ov = std::move(extra);
  for (const auto& o : c.overrides) {
    auto eq = o.find('=');
    if (eq == std::string::npos)
      fail_config("ValidationError", "--set expects section.key=value");
    ov[o.substr(0, eq)] = o.substr(eq + 1);
  }
  return parse_config(c.config_path, ov);
}

void write_echo(const RunConfig& cfg) {
  fs::create_directories(cfg.output.dir);
  std::ofstream f(fs::path(cfg.output.dir) / "effective_config.ini");
  f << cfg.echo_ini();
}

ValidationReport validate_any(const RunConfig& cfg) {
  return cfg.is_rd() ? validate(cfg.rd()) : validate(cfg.lattice());
}

GMap gmap_any(const RunConfig& cfg) {
  return cfg.is_rd() ? build_G_rd(cfg.rd()) : build_G_lattice(cfg.lattice());
}

ConvolutionSystem reduce_any(const RunConfig& cfg, double c) {
  return cfg.is_rd() ? reduce(cfg.rd(), c) : reduce_lattice(cfg.lattice(), c);
}

int cmd_validate(const Common& com, const std::string& json_out) {
  RunConfig cfg = load(com);
  write_echo(cfg);
  ValidationReport rep = validate_any(cfg);
  JsonWriter w;
  w.begin_object();
  w.field("model_type", cfg.is_rd() ? "rd" : "lattice");
  w.field("s_max", rep.s_max);
  w.field("all_pass", rep.all_pass());
  w.begin_array("checks");
  for (const auto& c : rep.checks) {
    w.begin_object();
    w.field("name", c.name);
    w.field("pass", c.pass);
    w.field("detail", c.detail);
    if (c.witness != 0.0) w.field("witness", c.witness);
    w.end_object();
  }
  w.end_array();
  w.end_object();
  if (!json_out.empty()) w.write_file(json_out);
  std::cout << w.str() << "\n";
  return rep.all_pass() ? 0 : 4;
}

int cmd_speeds(const Common& com, const std::string& side_str, const std::string& json_out) {
  RunConfig cfg = load(com);
  write_echo(cfg);
  validate_any(cfg).require_all();
  SpeedSide side = side_str == "plus"    ? SpeedSide::Plus
                   : side_str == "minus" ? SpeedSide::Minus
                                         : SpeedSide::Both;
  CriticalSpeeds cs =
      cfg.is_rd() ? critical_speeds(cfg.rd(), side) : critical_speeds(cfg.lattice(), side);
  JsonWriter w;
  w.begin_object();
  w.field("c_minus", cs.c_minus);
  w.field("c_plus", cs.c_plus);
  if (cs.tangent_lambda_plus) w.field("tangent_lambda_plus", *cs.tangent_lambda_plus);
  if (cs.tangent_lambda_minus) w.field("tangent_lambda_minus", *cs.tangent_lambda_minus);
  w.field("iterations_plus", static_cast<long>(cs.iterations_plus));
  w.field("iterations_minus", static_cast<long>(cs.iterations_minus));
  w.field("residual_psi_plus", cs.residual_psi_plus);
  w.field("residual_dpsi_plus", cs.residual_dpsi_plus);
  w.field("residual_psi_minus", cs.residual_psi_minus);
  w.field("residual_dpsi_minus", cs.residual_dpsi_minus);
  w.begin_array("method_log");
  for (const auto& s : cs.method_log) w.element(s);
  w.end_array();
  w.end_object();
  if (!json_out.empty()) w.write_file(json_out);
  std::cout << w.str() << "\n";
  return 0;
}

int cmd_characteristic(const Common& com, double c, const std::string& scan,
                       const std::string& csv_out) {
  RunConfig cfg = load(com);
  write_echo(cfg);
  validate_any(cfg).require_all();
  double z0, z1;
  long n;
  if (std::sscanf(scan.c_str(), "%lf:%lf:%ld", &z0, &z1, &n) != 3 || n < 2)
    fail_config("ValidationError", "--scan expects z0:z1:n with n >= 2");
  CharacteristicFn cf =
      cfg.is_rd()
          ? CharacteristicFn::rd(cfg.rd().f.slope0, cfg.rd().g.slope0, cfg.rd().h,
                                 cfg.rd().K, c)
          : CharacteristicFn::lattice(cfg.lattice().D, cfg.lattice().d, cfg.lattice().r,
                                      cfg.lattice().g.slope0, cfg.lattice().beta, c);
  CsvWriter csv({"z", "psi"});
  for (long i = 0; i < n; ++i) {
    double z = z0 + (z1 - z0) * i / (n - 1);
    if (!cf.strip().contains(z)) continue;
    csv.row({z, cf.psi(z)});
  }
  if (!csv_out.empty()) csv.write_file(csv_out);
  else std::cout << csv.str();
  return 0;
}

int cmd_gmap(const Common& com, const std::string& report_out, const std::string& csv_out) {
  RunConfig cfg = load(com);
  write_echo(cfg);
  validate_any(cfg).require_all();
  GMap G = gmap_any(cfg);
  AttractivityOptions ao;
  ao.seed = cfg.numerics.seed;
  ao.orbit_points = cfg.numerics.orbit_points;
  ao.orbit_steps = cfg.numerics.orbit_steps;
  G.verdict = attractivity(G, ao);

  JsonWriter w;
  w.begin_object();
  w.field("zeta1", G.zeta1);
  w.field("zeta2", G.zeta2);
  if (G.kappa) w.field("kappa", *G.kappa);
  w.field("slope0", G.slope0);
  w.field("verdict", to_string(G.verdict));
  w.field("construction", G.construction);
  w.field("fixed_point_tangency", G.fixed_point_tangency);
  w.begin_array("zeta1_candidates");
  for (auto& [a, b] : G.zeta1_candidates) {
    w.begin_object();
    w.field("lo", a);
    w.field("hi", b);
    w.end_object();
  }
  w.end_array();
  w.end_object();
  if (!report_out.empty()) w.write_file(report_out);
  std::cout << w.str() << "\n";

  if (!csv_out.empty()) {
    CsvWriter csv({"s", "G"});
    for (int i = 0; i <= 1000; ++i) {
      double s = G.zeta2 * i / 1000.0;
      csv.row({s, G(s)});
    }
    csv.write_file(csv_out);
  }
  return 0;
}

int cmd_profile(const Common& com, double c, const std::string& csv_out,
                const std::string& json_out) {
  RunConfig cfg = load(com);
  write_echo(cfg);
  validate_any(cfg).require_all();
  cfg.check_grid_extent(c);
  ConvolutionSystem sys = reduce_any(cfg, c);
  GMap G = gmap_any(cfg);
  SolveOptions opt;
  opt.T = cfg.numerics.T;
  opt.dx = cfg.numerics.dx;
  opt.tol = cfg.numerics.tol;
  opt.max_iter = cfg.numerics.max_iter;
  WaveProfile p = solve_profile(sys, G, opt);
  ClassifyDiagnostics diag;
  classify_profile(p, G, &diag);
  double dh = 0.0;
  bool have_decay = false;
  try {
    dh = decay_rate(p, G.zeta1);
    p.decay_hat = dh;
    have_decay = true;
  } catch (const Failure&) {
  }

  if (!csv_out.empty()) {
    CsvWriter csv({"t", "phi"});
    for (std::size_t i = 0; i < p.values.size(); ++i)
      csv.row({p.time_at(i), p.values[i]});
    csv.write_file(csv_out);
  }
  JsonWriter w;
  w.begin_object();
  w.field("c", p.c);
  w.field("residual", p.residual);
  w.field("iterations", p.iterations);
  w.field("classification", to_string(p.classification));
  w.field("lambda", p.lambda);
  w.field("nu", p.nu);
  w.field("eps", p.eps);
  w.field("delta", p.delta);
  if (have_decay) w.field("decay_hat", dh);
  w.field("zeta1", G.zeta1);
  w.field("zeta2", G.zeta2);
  if (G.kappa) w.field("kappa", *G.kappa);
  w.field("reflected", p.reflected);
  w.field("left_window_max", diag.M_left);
  w.field("right_window_min", diag.m_right);
  w.end_object();
  if (!json_out.empty()) w.write_file(json_out);
  std::cout << w.str() << "\n";
  return 0;
}

int cmd_evolve(const Common& com, const std::string& init_kind, double T_end, double dx,
               const std::string& dt_str, const std::string& snap_dir,
               const std::string& json_out, double level_flag) {
  RunConfig cfg = load(com);
  write_echo(cfg);
  validate_any(cfg).require_all();
  GMap G = gmap_any(cfg);
  double kappa = G.kappa.value_or(G.zeta2 / 2.0);

  Fn1 init;
  if (init_kind == "bump") {
    init = [kappa](double x) {
      double u = 1.0 - (x / 10.0) * (x / 10.0);
      return u > 0 ? kappa * u * u : 0.0;
    };
  } else if (init_kind == "step") {
    init = [kappa](double x) { return x <= 0.0 ? kappa : 0.0; };
  } else {
    // two-column csv (x, u), linearly interpolated, zero outside
    std::ifstream f(init_kind);
    if (!f) fail_config("ParseError", "cannot open init file " + init_kind);
    std::vector<double> xs, us;
    std::string line;
    while (std::getline(f, line)) {
      double a, b;
      std::replace(line.begin(), line.end(), ',', ' ');
      std::istringstream iss(line);
      if (iss >> a >> b) {
        xs.push_back(a);
        us.push_back(b);
      }
    }
    if (xs.size() < 2) fail_config("ParseError", "init csv needs >= 2 rows");
    init = [xs, us](double x) {
      if (x <= xs.front() || x >= xs.back()) return 0.0;
      auto it = std::upper_bound(xs.begin(), xs.end(), x);
      std::size_t i = static_cast<std::size_t>(it - xs.begin());
      double f2 = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
      return (1 - f2) * us[i - 1] + f2 * us[i];
    };
  }

  EvolveOptions opt;
  opt.dx = dx;
  opt.dt = dt_str == "auto" ? 0.0 : std::stod(dt_str);
  FieldHistory h = cfg.is_rd() ? simulate_rd(cfg.rd(), init, T_end, opt)
                               : simulate_lattice(cfg.lattice(), init, T_end, opt);

  double level = level_flag > 0 ? level_flag : kappa / 2.0;
  FrontSpeeds speeds{};
  bool have_speeds = false;
  try {
    speeds = front_speed(h, level);
    have_speeds = true;
  } catch (const Failure&) {
  }
  WaveClass wc = classify_wave(h, kappa, level);

  if (!snap_dir.empty()) {
    fs::create_directories(snap_dir);
    for (std::size_t s = 0; s < h.snaps.size(); ++s) {
      char name[64];
      std::snprintf(name, sizeof name, "snap_%04zu.csv", s);
      CsvWriter csv({"x", "u"});
      for (std::size_t i = 0; i < h.snaps[s].size(); ++i)
        csv.row({h.x_at(i), h.snaps[s][i]});
      csv.write_file((fs::path(snap_dir) / name).string());
    }
  }

  JsonWriter w;
  w.begin_object();
  w.field("T_end", T_end);
  w.field("dt", h.dt);
  w.field("level", level);
  w.field("kappa", kappa);
  if (have_speeds) {
    if (speeds.left_valid) w.field("left_speed", speeds.left);
    if (speeds.right_valid) w.field("right_speed", speeds.right);
  }
  w.field("classification", to_string(wc));
  w.field("kernel_renorm", h.kernel_renorm);
  w.field("widenings", static_cast<long>(h.widenings));
  w.field("positivity_clips", h.positivity_clips);
  w.field("sup_seen", h.sup_seen);
  w.end_object();
  if (!json_out.empty()) w.write_file(json_out);
  std::cout << w.str() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"semiwave: wavefront analysis for monostable nonlocal equations"};
  app.require_subcommand(1);

  Common com;
  std::string json_out, csv_out, side = "both", scan = "-2:2:201";
  std::string init_kind = "bump", dt_str = "auto", snap_dir;
  double cval = 0.0, T_end = 100.0, dx = 0.1, level = 0.0, tol_flag = 0.0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--model", com.config_path, "run config file")->required();
    sub->add_option("--set", com.overrides, "override section.key=value");
  };

  auto* v = app.add_subcommand("validate", "check the paper hypotheses numerically");
  add_common(v);
  v->add_option("--json", json_out, "report path");

  auto* s = app.add_subcommand("speeds", "critical speeds c_*^-/c_*^+");
  add_common(s);
  s->add_option("--side", side, "plus|minus|both")
      ->check(CLI::IsMember({"plus", "minus", "both"}));
  s->add_option("--json", json_out, "output path");

  auto* ch = app.add_subcommand("characteristic", "scan psi(z, c)");
  add_common(ch);
  ch->add_option("--c", cval, "wave speed")->required();
  ch->add_option("--scan", scan, "z0:z1:n");
  ch->add_option("--csv", csv_out, "output path (stdout if omitted)");

  auto* gm = app.add_subcommand("gmap", "birth map G, thresholds, attractivity");
  add_common(gm);
  gm->add_option("--report", json_out, "report path");
  gm->add_option("--csv", csv_out, "(s, G(s)) samples");

  auto* pr = app.add_subcommand("profile", "solve a semi-wavefront profile");
  add_common(pr);
  pr->add_option("--c", cval, "wave speed")->required();
  pr->add_option("--T", T_end, "grid half-length override");
  pr->add_option("--dx", dx, "grid spacing override");
  pr->add_option("--tol", tol_flag, "residual tolerance override");
  pr->add_option("--csv", csv_out, "(t, phi) output");
  pr->add_option("--json", json_out, "metadata output");

  auto* ev = app.add_subcommand("evolve", "direct time-domain simulation");
  add_common(ev);
  ev->add_option("--init", init_kind, "bump|step|file.csv");
  ev->add_option("--T", T_end, "end time");
  ev->add_option("--dx", dx, "spatial step");
  ev->add_option("--dt", dt_str, "time step or auto");
  ev->add_option("--snapshots", snap_dir, "snapshot directory");
  ev->add_option("--json", json_out, "summary path");
  ev->add_option("--level", level, "level-set threshold (default kappa/2)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (v->parsed()) return cmd_validate(com, json_out);
    if (s->parsed()) return cmd_speeds(com, side, json_out);
    if (ch->parsed()) return cmd_characteristic(com, cval, scan, csv_out);
    if (gm->parsed()) return cmd_gmap(com, json_out, csv_out);
    if (pr->parsed()) {
      std::map<std::string, std::string> ov;
      char b[40];
      if (pr->count("--T")) {
        std::snprintf(b, sizeof b, "%.17g", T_end);
        ov["numerics.T"] = b;
      }
      if (pr->count("--dx")) {
        std::snprintf(b, sizeof b, "%.17g", dx);
        ov["numerics.dx"] = b;
      }
      if (pr->count("--tol")) {
        char b[40];
        std::snprintf(b, sizeof b, "%.17g", tol_flag);
        ov["numerics.tol"] = b;
      }
      for (auto& [k, vv] : ov) com.overrides.push_back(k + "=" + vv);
      return cmd_profile(com, cval, csv_out, json_out);
    }
    if (ev->parsed())
      return cmd_evolve(com, init_kind, T_end, dx, dt_str, snap_dir, json_out, level);
  } catch (const Failure& e) {
    std::cerr << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "InternalError: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
