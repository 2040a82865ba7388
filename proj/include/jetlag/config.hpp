#pragma once

// JSON problem configuration. Unknown fields are rejected at every level.
//
// {
//   "dims": {"p": 2, "n": 2},
//   "lagrangian": {"kind": "expression" | "harmonic" | "electrodynamics",
//                  "expression": "...", "g_entries": [[...]],
//                  "U_entries": [[...]], "F": "..."},
//   "temporal_metric": {"kind": "flat" | "expression", "entries": [[...]],
//                       "signature": [pos, neg]},
//   "sampling": {"box": [[lo, hi], ...], "count": 64, "seed": 0},
//   "tolerances": {"regularity": 1e-6, "compatibility": 1e-7, "crosscheck": 1e-5},
//   "solver": {"t_end": 1, "dt": 1e-3, "initial": {"t": 0, "x": [...], "y": [...]}},
//   "grid": {"shape": [...], "box": [[lo, hi], ...], "map": ["expr in t", ...]}
// }
//
// sampling.box lists one interval per flat coordinate (t, then x, then v in
// i-major order), or a single interval applied to all of them. For the
// expression kind, g_entries / U_entries / F are optional declared
// components checked against L by `verify`.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "jetlag/lagrangian.hpp"
#include "jetlag/sampling.hpp"

namespace jetlag {

class ConfigError : public Error {
 public:
  using Error::Error;
};

struct Tolerances {
  double regularity = 1e-6;
  double compatibility = 1e-7;
  double crosscheck = 1e-5;
};

struct SolverConfig {
  double t_end = 1.0;
  double dt = 1e-3;
  double t0 = 0.0;
  std::vector<double> x;
  std::vector<double> y;
};

struct GridConfig {
  std::vector<std::size_t> shape;
  std::vector<Interval> box;
  std::vector<dsl::Expr> map;  // x^i(t), one per spatial coordinate
};

struct ProblemConfig {
  Dims dims;
  std::optional<LagrangianModel> model;
  SamplingBox box;
  std::size_t count = 64;
  std::uint64_t seed = 0;
  Tolerances tol;
  std::optional<SolverConfig> solver;
  std::optional<GridConfig> grid;
  std::vector<std::string> warnings;
  std::string hash;  // SHA-256 of the canonical JSON text

  const LagrangianModel& lagrangian() const { return *model; }
};

ProblemConfig parse_config(const std::string& text);
ProblemConfig load_config(const std::string& path);

std::string sha256_hex(const std::string& data);

/// "t=0.1,0.2;x=1,2;v=0,0,0,0"; missing parts are zero.
JetPoint parse_point(const std::string& spec, const Dims& d);

}  // namespace jetlag
