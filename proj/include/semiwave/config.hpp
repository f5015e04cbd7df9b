#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>

#include "semiwave/model.hpp"

namespace semiwave {

// Run configuration from an INI-style file with sections [model], [kernel],
// [nonlinearity], [numerics], [output]. Unknown sections or keys are
// rejected; CLI flags override config keys.
struct NumericsConfig {
  double T = 200.0;
  double dx = 0.05;
  double dt = 0.0;  // 0 = auto
  double tol = 1e-6;
  long max_iter = 10000;
  std::uint64_t seed = 0;
  int orbit_points = 10000;
  long orbit_steps = 10000;
};

struct OutputConfig {
  std::string dir = ".";
};

struct RunConfig {
  explicit RunConfig(std::variant<RDModel, LatticeModel> m) : model(std::move(m)) {}

  std::variant<RDModel, LatticeModel> model;
  NumericsConfig numerics;
  OutputConfig output;
  // section -> key -> literal value, for the effective-config echo
  std::map<std::string, std::map<std::string, std::string>> effective;

  bool is_rd() const { return std::holds_alternative<RDModel>(model); }
  const RDModel& rd() const { return std::get<RDModel>(model); }
  const LatticeModel& lattice() const { return std::get<LatticeModel>(model); }

  // T > 10 * max(kernel width, |c| h); throws ValidationError
  void check_grid_extent(double c) const;
  std::string echo_ini() const;
};

// Throws ParseError (malformed file/number, with line info) or
// ValidationError (listing every unknown/invalid field).
RunConfig parse_config(const std::string& path);

// Applies a "section.key=value" override before model construction.
RunConfig parse_config(const std::string& path,
                       const std::map<std::string, std::string>& overrides);

}  // namespace semiwave
