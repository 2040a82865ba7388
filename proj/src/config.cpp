#include "jetlag/config.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include <json.hpp>

namespace jetlag {

using nlohmann::json;

namespace {

constexpr std::size_t kMaxDim = 8;

[[noreturn]] void fail(const std::string& where, const std::string& what) { throw ConfigError(where + ": " + what); }

void allow_only(const json& obj, const std::string& where, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) fail(where, "expected an object");
  std::set<std::string> ok(keys.begin(), keys.end());
  for (const auto& [k, v] : obj.items())
    if (!ok.count(k)) fail(where, "unknown field '" + k + "'");
}

const json& need(const json& obj, const std::string& where, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(where, std::string("missing field '") + key + "'");
  return *it;
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) fail(where, "expected a number");
  double d = v.get<double>();
  if (!std::isfinite(d)) fail(where, "expected a finite number");
  return d;
}

std::size_t count_value(const json& v, const std::string& where, std::size_t lo, std::size_t hi) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) fail(where, "expected a non-negative integer");
  auto n = v.get<std::uint64_t>();
  if (n < lo || n > hi) fail(where, "must be in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return static_cast<std::size_t>(n);
}

std::string text(const json& v, const std::string& where) {
  if (!v.is_string()) fail(where, "expected a string");
  return v.get<std::string>();
}

std::vector<double> numbers(const json& v, const std::string& where, std::size_t size) {
  if (!v.is_array() || v.size() != size) fail(where, "expected an array of " + std::to_string(size) + " numbers");
  std::vector<double> out;
  for (std::size_t k = 0; k < size; ++k) out.push_back(number(v[k], where + "[" + std::to_string(k) + "]"));
  return out;
}

Interval interval(const json& v, const std::string& where) {
  auto pair = numbers(v, where, 2);
  if (!(pair[0] < pair[1])) fail(where, "interval needs lo < hi");
  return {pair[0], pair[1]};
}

std::vector<std::vector<std::string>> text_matrix(const json& v, const std::string& where, std::size_t rows,
                                                  std::size_t cols) {
  if (!v.is_array() || v.size() != rows) fail(where, "expected " + std::to_string(rows) + " rows");
  std::vector<std::vector<std::string>> out;
  for (std::size_t r = 0; r < rows; ++r) {
    const auto& row = v[r];
    if (!row.is_array() || row.size() != cols) fail(where, "row " + std::to_string(r) + " needs " + std::to_string(cols) + " entries");
    std::vector<std::string> cells;
    for (std::size_t c = 0; c < cols; ++c) {
      const auto& cell = row[c];
      if (cell.is_number()) {
        std::ostringstream os;
        os << std::setprecision(17) << cell.get<double>();
        cells.push_back(os.str());
      } else {
        cells.push_back(text(cell, where + "[" + std::to_string(r) + "][" + std::to_string(c) + "]"));
      }
    }
    out.push_back(std::move(cells));
  }
  return out;
}

ExprMatrix expr_matrix(const std::vector<std::vector<std::string>>& cells, const Dims& d, const std::string& where) {
  try {
    return ExprMatrix::parse(cells, d);
  } catch (const dsl::ParseError& e) {
    fail(where, e.what());
  }
}

dsl::Expr expr(const std::string& src, const Dims& d, const std::string& where) {
  try {
    return dsl::parse(src, d);
  } catch (const dsl::ParseError& e) {
    fail(where, e.what());
  }
}

// Warn when a square text matrix differs from its transpose after
// normalization through the parser.
void symmetry_warning(const std::vector<std::vector<std::string>>& cells, const Dims& d, const std::string& where,
                      std::vector<std::string>& warnings) {
  for (std::size_t i = 0; i < cells.size(); ++i)
    for (std::size_t j = i + 1; j < cells.size(); ++j)
      if (dsl::format(dsl::parse(cells[i][j], d)) != dsl::format(dsl::parse(cells[j][i], d))) {
        warnings.push_back(where + " is not symmetric as text; using its symmetric part");
        return;
      }
}

TemporalMetric temporal_metric(const json& j, std::size_t p, std::vector<std::string>& warnings) {
  const std::string where = "temporal_metric";
  allow_only(j, where, {"kind", "entries", "signature"});
  const std::string kind = text(need(j, where, "kind"), where + ".kind");
  auto sig_v = numbers(need(j, where, "signature"), where + ".signature", 2);
  for (double s : sig_v)
    if (s < 0 || s != std::floor(s)) fail(where + ".signature", "entries must be non-negative integers");
  Signature sig{static_cast<int>(sig_v[0]), static_cast<int>(sig_v[1]), 0};
  if (static_cast<std::size_t>(sig.pos + sig.neg) != p) fail(where + ".signature", "pos + neg must equal p");
  if (kind == "flat") {
    if (j.contains("entries")) fail(where, "flat metric takes no entries");
    return TemporalMetric::flat(p, sig);
  }
  if (kind != "expression") fail(where + ".kind", "expected \"flat\" or \"expression\"");
  auto cells = text_matrix(need(j, where, "entries"), where + ".entries", p, p);
  Dims d(p, 1);
  auto m = expr_matrix(cells, d, where + ".entries");
  if (m.uses(dsl::Op::VarX) || m.uses(dsl::Op::VarV)) fail(where + ".entries", "entries may depend on t only");
  symmetry_warning(cells, d, where + ".entries", warnings);
  return TemporalMetric::from_entries(std::move(m), sig);
}

LagrangianModel lagrangian(const json& j, const Dims& d, TemporalMetric h, std::vector<std::string>& warnings) {
  const std::string where = "lagrangian";
  allow_only(j, where, {"kind", "expression", "g_entries", "U_entries", "F"});
  const std::string kind = text(need(j, where, "kind"), where + ".kind");
  auto g_cells = [&]() { return text_matrix(need(j, where, "g_entries"), where + ".g_entries", d.n, d.n); };
  ExprMatrix g, U;
  dsl::Expr F;
  bool any_component = j.contains("g_entries") || j.contains("U_entries") || j.contains("F");
  if (j.contains("g_entries")) {
    auto cells = g_cells();
    g = expr_matrix(cells, d, where + ".g_entries");
    if (g.uses(dsl::Op::VarV)) fail(where + ".g_entries", "entries may not depend on v");
    symmetry_warning(cells, d, where + ".g_entries", warnings);
  }
  if (j.contains("U_entries")) {
    U = expr_matrix(text_matrix(j["U_entries"], where + ".U_entries", d.n, d.p), d, where + ".U_entries");
    if (U.uses(dsl::Op::VarV)) fail(where + ".U_entries", "entries may not depend on v");
  }
  if (j.contains("F")) {
    F = expr(text(j["F"], where + ".F"), d, where + ".F");
    if (F.uses(dsl::Op::VarV)) fail(where + ".F", "may not depend on v");
  }
  if (kind == "expression") {
    auto e = expr(text(need(j, where, "expression"), where + ".expression"), d, where + ".expression");
    auto model = LagrangianModel::expression(d, std::move(e), std::move(h));
    if (any_component) {
      if (g.empty()) fail(where, "declared components need g_entries");
      model.declare_components({std::move(g), std::move(U), std::move(F)});
    }
    return model;
  }
  if (j.contains("expression")) fail(where, "'expression' is only valid for kind \"expression\"");
  if (kind == "harmonic") {
    if (j.contains("U_entries") || j.contains("F")) fail(where, "harmonic Lagrangians take g_entries only");
    g_cells();
    return LagrangianModel::harmonic(d, std::move(g), std::move(h));
  }
  if (kind == "electrodynamics") {
    g_cells();
    return LagrangianModel::electrodynamics(d, std::move(g), std::move(U), std::move(F), std::move(h));
  }
  fail(where + ".kind", "expected \"expression\", \"harmonic\" or \"electrodynamics\"");
}

void sampling(const json& j, ProblemConfig& cfg) {
  const std::string where = "sampling";
  allow_only(j, where, {"box", "count", "seed"});
  const Dims& d = cfg.dims;
  if (j.contains("box")) {
    const auto& b = j["box"];
    std::vector<Interval> all;
    if (b.is_array() && b.size() == 2 && b[0].is_number()) {
      all.assign(d.total(), interval(b, where + ".box"));
    } else {
      if (!b.is_array() || b.size() != d.total())
        fail(where + ".box", "expected one [lo, hi] or " + std::to_string(d.total()) + " intervals");
      for (std::size_t k = 0; k < b.size(); ++k) all.push_back(interval(b[k], where + ".box[" + std::to_string(k) + "]"));
    }
    cfg.box.t.assign(all.begin(), all.begin() + static_cast<long>(d.p));
    cfg.box.x.assign(all.begin() + static_cast<long>(d.p), all.begin() + static_cast<long>(d.p + d.n));
    cfg.box.v.assign(all.begin() + static_cast<long>(d.p + d.n), all.end());
  }
  if (j.contains("count")) cfg.count = count_value(j["count"], where + ".count", 1, 100000);
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) fail(where + ".seed", "expected a non-negative integer");
    cfg.seed = j["seed"].get<std::uint64_t>();
  }
}

void tolerances(const json& j, Tolerances& tol) {
  const std::string where = "tolerances";
  allow_only(j, where, {"regularity", "compatibility", "crosscheck"});
  auto read = [&](const char* key, double& slot) {
    if (!j.contains(key)) return;
    slot = number(j[key], where + "." + key);
    if (!(slot > 0)) fail(where + "." + key, "must be positive");
  };
  read("regularity", tol.regularity);
  read("compatibility", tol.compatibility);
  read("crosscheck", tol.crosscheck);
}

SolverConfig solver(const json& j, const Dims& d) {
  const std::string where = "solver";
  allow_only(j, where, {"t_end", "dt", "initial"});
  SolverConfig s;
  s.t_end = number(need(j, where, "t_end"), where + ".t_end");
  s.dt = number(need(j, where, "dt"), where + ".dt");
  if (!(s.dt > 0)) fail(where + ".dt", "must be positive");
  const auto& init = need(j, where, "initial");
  allow_only(init, where + ".initial", {"t", "x", "y"});
  if (init.contains("t")) s.t0 = number(init["t"], where + ".initial.t");
  if (!(s.t_end > s.t0)) fail(where + ".t_end", "must exceed the initial time");
  if ((s.t_end - s.t0) / s.dt > 1e7) fail(where + ".dt", "too many steps");
  s.x = numbers(need(init, where + ".initial", "x"), where + ".initial.x", d.n);
  s.y = numbers(need(init, where + ".initial", "y"), where + ".initial.y", d.n);
  return s;
}

GridConfig grid(const json& j, const Dims& d) {
  const std::string where = "grid";
  allow_only(j, where, {"shape", "box", "map"});
  GridConfig g;
  const auto& shape = need(j, where, "shape");
  if (!shape.is_array() || shape.size() != d.p) fail(where + ".shape", "expected p node counts");
  std::size_t total = 1;
  for (std::size_t a = 0; a < d.p; ++a) {
    g.shape.push_back(count_value(shape[a], where + ".shape", 5, 100000));
    total *= g.shape.back();
    if (total > 4000000) fail(where + ".shape", "too many nodes");
  }
  const auto& box = need(j, where, "box");
  if (!box.is_array() || box.size() != d.p) fail(where + ".box", "expected p intervals");
  for (std::size_t a = 0; a < d.p; ++a) g.box.push_back(interval(box[a], where + ".box"));
  const auto& map = need(j, where, "map");
  if (!map.is_array() || map.size() != d.n) fail(where + ".map", "expected n expressions");
  for (std::size_t i = 0; i < d.n; ++i) {
    auto e = expr(text(map[i], where + ".map"), d, where + ".map");
    if (e.uses(dsl::Op::VarX) || e.uses(dsl::Op::VarV)) fail(where + ".map", "map entries may depend on t only");
    g.map.push_back(std::move(e));
  }
  return g;
}

}  // namespace

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) throw Error("sha256 failed");
  std::ostringstream os;
  for (unsigned int k = 0; k < len; ++k) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[k]);
  return os.str();
}

ProblemConfig parse_config(const std::string& src) {
  json j;
  try {
    j = json::parse(src);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  allow_only(j, "config", {"dims", "lagrangian", "temporal_metric", "sampling", "tolerances", "solver", "grid"});
  ProblemConfig cfg;
  const auto& dj = need(j, "config", "dims");
  allow_only(dj, "dims", {"p", "n"});
  cfg.dims = Dims(count_value(need(dj, "dims", "p"), "dims.p", 1, kMaxDim), count_value(need(dj, "dims", "n"), "dims.n", 1, kMaxDim));
  cfg.box = SamplingBox::uniform(cfg.dims);
  try {
    auto h = temporal_metric(need(j, "config", "temporal_metric"), cfg.dims.p, cfg.warnings);
    cfg.model = lagrangian(need(j, "config", "lagrangian"), cfg.dims, std::move(h), cfg.warnings);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  if (j.contains("sampling")) sampling(j["sampling"], cfg);
  if (j.contains("tolerances")) tolerances(j["tolerances"], cfg.tol);
  if (j.contains("solver")) cfg.solver = solver(j["solver"], cfg.dims);
  if (j.contains("grid")) cfg.grid = grid(j["grid"], cfg.dims);
  cfg.hash = sha256_hex(j.dump());
  return cfg;
}

ProblemConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return parse_config(os.str());
}

JetPoint parse_point(const std::string& spec, const Dims& d) {
  JetPoint pt(d);
  std::set<char> seen;
  std::stringstream parts(spec);
  std::string part;
  while (std::getline(parts, part, ';')) {
    if (part.empty()) continue;
    if (part.size() < 2 || part[1] != '=') throw ConfigError("--point: expected name=values, got '" + part + "'");
    const char name = part[0];
    std::vector<double>* target = name == 't' ? &pt.t : name == 'x' ? &pt.x : name == 'v' ? &pt.v : nullptr;
    if (!target) throw ConfigError("--point: unknown part '" + std::string(1, name) + "'");
    if (!seen.insert(name).second) throw ConfigError("--point: repeated part '" + std::string(1, name) + "'");
    std::vector<double> vals;
    std::stringstream items(part.substr(2));
    std::string item;
    while (std::getline(items, item, ',')) {
      try {
        std::size_t used = 0;
        double v = std::stod(item, &used);
        if (used != item.size() || !std::isfinite(v)) throw std::invalid_argument(item);
        vals.push_back(v);
      } catch (const std::exception&) {
        throw ConfigError("--point: bad number '" + item + "'");
      }
    }
    if (vals.size() != target->size())
      throw ConfigError("--point: '" + std::string(1, name) + "' needs " + std::to_string(target->size()) + " values");
    *target = vals;
  }
  return pt;
}

}  // namespace jetlag
