#include "semiwave/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace semiwave {

namespace {

using Section = std::map<std::string, std::string>;
using Raw = std::map<std::string, Section>;

std::string trim(const std::string& s) {
  auto a = s.find_first_not_of(" \t\r");
  auto b = s.find_last_not_of(" \t\r");
  if (a == std::string::npos) return "";
  return s.substr(a, b - a + 1);
}

Raw read_ini(const std::string& path) {
  std::ifstream f(path);
  if (!f) fail_config("ParseError", "cannot open config file " + path);
  Raw raw;
  std::string line, section;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']')
        fail_config("ParseError", "line " + std::to_string(lineno) + ": unterminated section");
      section = trim(t.substr(1, t.size() - 2));
      raw[section];
      continue;
    }
    auto eq = t.find('=');
    if (eq == std::string::npos)
      fail_config("ParseError", "line " + std::to_string(lineno) + ": expected key = value");
    if (section.empty())
      fail_config("ParseError", "line " + std::to_string(lineno) + ": key outside any section");
    std::string key = trim(t.substr(0, eq));
    std::string val = trim(t.substr(eq + 1));
    if (raw[section].count(key))
      fail_config("ParseError",
                  "line " + std::to_string(lineno) + ": duplicate key " + key);
    raw[section][key] = val;
  }
  return raw;
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing");
    return d;
  } catch (...) {
    fail_config("ParseError", "key " + key + ": cannot parse number '" + v + "'");
  }
}

long to_long(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    long d = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing");
    return d;
  } catch (...) {
    fail_config("ParseError", "key " + key + ": cannot parse integer '" + v + "'");
  }
}

// Pulls a key from a section, recording consumption for strict checking.
class SectionReader {
public:
  SectionReader(const std::string& name, const Section& s) : name_(name), s_(s) {}

  std::optional<std::string> get(const std::string& key) {
    consumed_.push_back(key);
    auto it = s_.find(key);
    if (it == s_.end()) return std::nullopt;
    return it->second;
  }
  std::string require(const std::string& key) {
    auto v = get(key);
    if (!v) fail_config("ValidationError", "[" + name_ + "] missing required key " + key);
    return *v;
  }
  double num(const std::string& key, double def) {
    auto v = get(key);
    return v ? to_double(name_ + "." + key, *v) : def;
  }
  double num_required(const std::string& key) {
    return to_double(name_ + "." + key, require(key));
  }
  void check_no_unknown(std::string& errors) const {
    for (const auto& [k, v] : s_) {
      if (std::find(consumed_.begin(), consumed_.end(), k) == consumed_.end())
        errors += "[" + name_ + "] unknown key '" + k + "'; ";
    }
  }

private:
  std::string name_;
  const Section& s_;
  std::vector<std::string> consumed_;
};

std::vector<std::pair<double, double>> read_two_column_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) fail_config("ParseError", "cannot open csv file " + path);
  std::vector<std::pair<double, double>> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::replace(t.begin(), t.end(), ',', ' ');
    std::istringstream iss(t);
    double a, b;
    if (!(iss >> a >> b)) {
      if (lineno == 1) continue;  // header row
      fail_config("ParseError", path + ": line " + std::to_string(lineno) + " not numeric");
    }
    rows.emplace_back(a, b);
  }
  if (rows.size() < 2) fail_config("ParseError", path + ": needs at least 2 data rows");
  return rows;
}

Kernel build_kernel(SectionReader& r) {
  std::string family = r.require("family");
  if (family == "shifted_gaussian") {
    return Kernel::gaussian(r.num("variance", 2.0), r.num("shift", 0.0));
  }
  if (family == "one_sided_exponential") {
    std::string side = r.get("side").value_or("right");
    if (side != "right" && side != "left")
      fail_config("ValidationError", "[kernel] side must be right or left");
    double rate = r.num_required("rate");
    return Kernel::one_sided_exponential(rate, side == "right" ? Side::Right : Side::Left,
                                         r.num("scale", rate), r.num("offset", 0.0));
  }
  if (family == "two_sided_resolvent") {
    double nu = r.num_required("nu"), mu = r.num_required("mu");
    return Kernel::resolvent(nu, mu, r.num("sigma", mu - nu));
  }
  if (family == "discrete_lattice") {
    std::vector<std::pair<int, double>> w;
    if (auto ws = r.get("weights")) {
      // "k:w,k:w,..."
      std::string s = *ws;
      std::replace(s.begin(), s.end(), ',', ' ');
      std::istringstream iss(s);
      std::string item;
      while (iss >> item) {
        auto colon = item.find(':');
        if (colon == std::string::npos)
          fail_config("ParseError", "[kernel] weights entries must be k:value");
        w.emplace_back(static_cast<int>(to_long("weights", item.substr(0, colon))),
                       to_double("weights", item.substr(colon + 1)));
      }
    } else if (auto csv = r.get("csv")) {
      for (auto& [k, v] : read_two_column_csv(*csv))
        w.emplace_back(static_cast<int>(std::llround(k)), v);
    } else {
      fail_config("ValidationError", "[kernel] discrete_lattice needs weights or csv");
    }
    return Kernel::lattice(std::move(w), r.num("offset", 0.0));
  }
  if (family == "grid_tabulated") {
    auto rows = read_two_column_csv(r.require("csv"));
    double dx = rows[1].first - rows[0].first;
    std::vector<double> samples;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i + 1 < rows.size() &&
          std::abs(rows[i + 1].first - rows[i].first - dx) > 1e-9 * std::max(1.0, dx))
        fail_config("ParseError", "[kernel] grid_tabulated csv must be equispaced");
      samples.push_back(rows[i].second);
    }
    return Kernel::tabulated(rows[0].first, dx, std::move(samples));
  }
  fail_config("ValidationError", "[kernel] unknown family '" + family + "'");
}

ScalarMap build_birth(SectionReader& r) {
  std::string type = r.require("type");
  if (type == "nicholson") return maps::nicholson(r.num_required("p"));
  if (type == "mackey") return maps::mackey(r.num_required("p"), r.num("n", 2.0));
  if (type == "linear_capped")
    return maps::linear_capped(r.num_required("p"), r.num_required("cap"));
  if (type == "tabulated") return maps::tabulated(read_two_column_csv(r.require("csv")));
  fail_config("ValidationError", "[nonlinearity] unknown type '" + type + "'");
}

ScalarMap build_death(const std::string& kind, double rate) {
  if (kind == "linear") return maps::linear(rate);
  if (kind == "expm1") return maps::expm1_map(rate);
  fail_config("ValidationError", "[model] unknown death rule f = '" + kind + "'");
}

}  // namespace

void RunConfig::check_grid_extent(double c) const {
  double kernel_width =
      is_rd() ? rd().K.stddev() : std::get<LatticeModel>(model).beta.stddev();
  double h = is_rd() ? rd().h : std::get<LatticeModel>(model).r;
  double need = 10.0 * std::max(kernel_width, std::abs(c) * h);
  if (!(numerics.T > need))
    fail_config("ValidationError",
                "T = " + std::to_string(numerics.T) + " too small; needs T > " +
                    std::to_string(need) + " (10 max(kernel width, |c| h))");
}

std::string RunConfig::echo_ini() const {
  std::string out;
  for (const auto& [sec, kv] : effective) {
    out += "[" + sec + "]\n";
    for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
    out += "\n";
  }
  return out;
}

RunConfig parse_config(const std::string& path) { return parse_config(path, {}); }

RunConfig parse_config(const std::string& path,
                       const std::map<std::string, std::string>& overrides) {
  Raw raw = read_ini(path);
  for (const auto& [skey, val] : overrides) {
    auto dot = skey.find('.');
    if (dot == std::string::npos)
      fail_config("ValidationError", "override must be section.key: " + skey);
    raw[skey.substr(0, dot)][skey.substr(dot + 1)] = val;
  }

  std::string errors;
  static const char* known_sections[] = {"model", "kernel", "nonlinearity", "numerics",
                                         "output"};
  for (const auto& [sec, kv] : raw) {
    if (std::find_if(std::begin(known_sections), std::end(known_sections),
                     [&](const char* s) { return sec == s; }) == std::end(known_sections))
      errors += "unknown section [" + sec + "]; ";
  }

  static const Section empty;
  auto section = [&](const char* name) -> const Section& {
    auto it = raw.find(name);
    return it == raw.end() ? empty : it->second;
  };

  SectionReader mr("model", section("model"));
  SectionReader kr("kernel", section("kernel"));
  SectionReader nr("nonlinearity", section("nonlinearity"));
  SectionReader ur("numerics", section("numerics"));
  SectionReader outr("output", section("output"));

  std::string type = mr.require("type");
  ScalarMap g = build_birth(nr);
  std::optional<std::variant<RDModel, LatticeModel>> model;
  if (type == "rd") {
    double h = mr.num("h", 0.0);
    std::string fkind = mr.get("f").value_or("linear");
    double frate = mr.num("f_rate", 1.0);
    Kernel K = build_kernel(kr);
    if (h < 0) errors += "[model] h must be >= 0; ";
    model = RDModel{build_death(fkind, frate), g, K, h};
  } else if (type == "lattice") {
    double D = mr.num("D", 1.0), d = mr.num("d", 1.0), rr = mr.num("r", 0.0);
    Kernel beta = build_kernel(kr);
    if (!beta.atomic()) errors += "[kernel] lattice model needs a discrete_lattice kernel; ";
    if (!(D > 0) || !(d > 0) || rr < 0) errors += "[model] needs D > 0, d > 0, r >= 0; ";
    model = LatticeModel{D, d, rr, beta, g};
  } else {
    fail_config("ValidationError", "[model] type must be rd or lattice");
  }
  RunConfig cfg(std::move(*model));

  cfg.numerics.T = ur.num("T", cfg.numerics.T);
  cfg.numerics.dx = ur.num("dx", cfg.numerics.dx);
  std::string dt = ur.get("dt").value_or("auto");
  cfg.numerics.dt = dt == "auto" ? 0.0 : to_double("numerics.dt", dt);
  cfg.numerics.tol = ur.num("tol", cfg.numerics.tol);
  cfg.numerics.max_iter = to_long("numerics.max_iter",
                                  ur.get("max_iter").value_or("10000"));
  cfg.numerics.seed =
      static_cast<std::uint64_t>(to_long("numerics.seed", ur.get("seed").value_or("0")));
  cfg.numerics.orbit_points = static_cast<int>(
      to_long("numerics.orbit_points", ur.get("orbit_points").value_or("10000")));
  cfg.numerics.orbit_steps =
      to_long("numerics.orbit_steps", ur.get("orbit_steps").value_or("10000"));
  cfg.output.dir = outr.get("dir").value_or(".");

  if (!(cfg.numerics.tol > 0)) errors += "[numerics] tol must be > 0; ";
  if (!(cfg.numerics.dx > 0)) errors += "[numerics] dx must be > 0; ";
  if (!(cfg.numerics.T > 0)) errors += "[numerics] T must be > 0; ";
  if (cfg.numerics.dt < 0) errors += "[numerics] dt must be >= 0 or auto; ";
  if (cfg.numerics.max_iter <= 0) errors += "[numerics] max_iter must be > 0; ";

  mr.check_no_unknown(errors);
  kr.check_no_unknown(errors);
  nr.check_no_unknown(errors);
  ur.check_no_unknown(errors);
  outr.check_no_unknown(errors);
  if (!errors.empty()) fail_config("ValidationError", errors);

  cfg.effective = raw;
  // fill defaults into the echo
  auto& num = cfg.effective["numerics"];
  auto fill = [&num](const char* k, const std::string& v) {
    if (!num.count(k)) num[k] = v;
  };
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", cfg.numerics.T);
  fill("T", buf);
  std::snprintf(buf, sizeof buf, "%.17g", cfg.numerics.dx);
  fill("dx", buf);
  std::snprintf(buf, sizeof buf, "%.17g", cfg.numerics.tol);
  fill("tol", buf);
  fill("dt", dt);
  fill("max_iter", std::to_string(cfg.numerics.max_iter));
  fill("seed", std::to_string(cfg.numerics.seed));
  fill("orbit_points", std::to_string(cfg.numerics.orbit_points));
  fill("orbit_steps", std::to_string(cfg.numerics.orbit_steps));
  cfg.effective["output"]["dir"] = cfg.output.dir;
  return cfg;
}

}  // namespace semiwave
