#include "jetlag/commands.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "jetlag/calculus.hpp"
#include "jetlag/curvature.hpp"
#include "jetlag/extremal.hpp"
#include "jetlag/regularity.hpp"
#include "jetlag/report.hpp"

namespace jetlag {

using nlohmann::json;

namespace {

class UsageError : public Error {
 public:
  using Error::Error;
};

// Invariant tolerances that are not configurable.
constexpr double kSchwartzTol = 1e-9;
constexpr double kIdentityTol = 1e-8;
constexpr double kDecompositionTol = 1e-8;
constexpr double kSymmetryTol = 1e-10;
constexpr double kZeroTol = 1e-7;
constexpr double kReductionTol = 1e-8;
constexpr std::size_t kGeometryPoints = 16;

std::uint64_t seed_of(const ProblemConfig& cfg, const CommandOptions& opt) { return opt.seed.value_or(cfg.seed); }

json header(const std::string& command, const ProblemConfig& cfg, std::uint64_t seed) {
  return {{"tool", "jetlag"},
          {"version", kVersion},
          {"command", command},
          {"config_hash", cfg.hash},
          {"seed", seed},
          {"dims", {{"p", cfg.dims.p}, {"n", cfg.dims.n}}},
          {"lagrangian", to_string(cfg.lagrangian().kind())},
          {"warnings", cfg.warnings}};
}

std::string warnings_text(const ProblemConfig& cfg) {
  std::string s;
  for (const auto& w : cfg.warnings) s += "warning: " + w + "\n";
  return s;
}

std::vector<JetPoint> sample_points(const ProblemConfig& cfg, std::size_t count, std::uint64_t seed) {
  Sampler rng(seed);
  std::vector<JetPoint> pts;
  for (std::size_t k = 0; k < count; ++k) pts.push_back(rng.draw(cfg.dims, cfg.box));
  return pts;
}

JetPoint command_point(const ProblemConfig& cfg, const CommandOptions& opt, std::uint64_t seed) {
  if (opt.point) return parse_point(*opt.point, cfg.dims);
  return sample_points(cfg, 1, seed).front();
}

json signature_json(const Signature& s) { return {{"pos", s.pos}, {"neg", s.neg}, {"zero", s.zero}}; }

struct Regularity {
  RegularityVerdict verdict;
  std::optional<ElectrodynamicsDecomposition> decomposition;
  std::string decomposition_error;
  double decomposition_residual = 0.0;
  bool regular = false;
};

Regularity assess(const Space& space, const ProblemConfig& cfg, std::uint64_t seed) {
  Regularity r;
  KroneckerOptions ko;
  ko.samples = cfg.count;
  ko.tol = cfg.tol.regularity;
  ko.seed = seed;
  r.verdict = kronecker_test(space, cfg.box, ko);
  r.regular = r.verdict.is_kronecker;
  if (r.regular && cfg.dims.p >= 2) {
    DecompositionOptions dop;
    dop.seed = seed;
    dop.tol = kDecompositionTol;
    try {
      r.decomposition = electrodynamics_decompose(space, cfg.box, dop);
    } catch (const DecompositionError& e) {
      r.decomposition_error = e.what();
      r.decomposition_residual = e.residual();
      r.regular = false;
    }
  }
  return r;
}

json regularity_json(const Regularity& r, bool with_samples) {
  const auto& v = r.verdict;
  json j = {{"is_kronecker", v.is_kronecker},
            {"velocity_dependent_g", v.velocity_dependent_g},
            {"max_block_residual", v.max_block_residual},
            {"max_velocity_spread", v.max_velocity_spread},
            {"signature", signature_json(v.signature)},
            {"sample_count", v.samples.size()},
            {"diagnostic", v.diagnostic}};
  if (with_samples) {
    json samples = json::array();
    for (const auto& s : v.samples)
      samples.push_back({{"point", point_json(s.point)},
                         {"g_estimate", matrix_json(s.g_estimate)},
                         {"residual", s.residual},
                         {"determinant", s.determinant},
                         {"ok", s.ok},
                         {"note", s.note}});
    j["samples"] = samples;
  }
  return j;
}

json decomposition_json(const Regularity& r, std::size_t p) {
  if (p < 2) return {{"applicable", false}};
  if (!r.verdict.is_kronecker) return {{"applicable", false}};
  if (!r.decomposition) return {{"applicable", true}, {"error", r.decomposition_error}, {"residual", r.decomposition_residual}};
  const auto& d = *r.decomposition;
  json samples = json::array();
  for (const auto& s : d.samples)
    samples.push_back({{"base", point_json(s.base)}, {"g", matrix_json(s.g)}, {"U", matrix_json(s.U)}, {"F", s.F}});
  return {{"applicable", true},
          {"max_reassembly_residual", d.max_reassembly_residual},
          {"max_curl_asymmetry", d.max_curl_asymmetry},
          {"samples", samples}};
}

json pack_json(const LinearConnectionPack& pack, const JetPoint& pt) {
  json j;
  for (auto f : {CoefficientFamily::H, CoefficientFamily::G, CoefficientFamily::L, CoefficientFamily::C})
    j[to_string(f)] = tensor_json(pack_tensor(pack, f, pt));
  return j;
}

json table_json(const ComponentTable& t) {
  json j;
  for (const auto& [key, tensor] : t.entries()) j[key] = tensor_json(tensor);
  return j;
}

json audit_json(const ZeroAudit& a) {
  return {{"torsion_zero", a.torsion_zero},
          {"curvature_zero", a.curvature_zero},
          {"max_abs", a.max_abs},
          {"worst", a.worst},
          {"passed", a.passed}};
}

CommandResult irregular_result(json report, const Regularity& r, const std::string& command) {
  CommandResult res;
  res.exit = exit_code::irregular;
  report["regularity"] = regularity_json(r, false);
  res.out = write_json(report);
  res.err = command + ": Lagrangian is not Kronecker h-regular";
  if (!r.verdict.diagnostic.empty()) res.err += " (" + r.verdict.diagnostic + ")";
  if (!r.decomposition_error.empty()) res.err += " (" + r.decomposition_error + ")";
  res.err += "\n";
  return res;
}

CommandResult cmd_analyze(const ProblemConfig& cfg, const CommandOptions& opt) {
  const auto seed = seed_of(cfg, opt);
  Space space(cfg.lagrangian());
  auto r = assess(space, cfg, seed);
  json report = header("analyze", cfg, seed);
  report["regularity"] = regularity_json(r, true);
  report["decomposition"] = decomposition_json(r, cfg.dims.p);
  report["regular"] = r.regular;
  CommandResult res;
  res.exit = r.regular ? exit_code::ok : exit_code::irregular;
  res.out = write_json(report);
  res.err = warnings_text(cfg);
  return res;
}

CommandResult cmd_geometry(const std::string& command, const ProblemConfig& cfg, const CommandOptions& opt) {
  const auto seed = seed_of(cfg, opt);
  Space space(cfg.lagrangian());
  json report = header(command, cfg, seed);
  const JetPoint pt = command_point(cfg, opt, seed);
  auto r = assess(space, cfg, seed);
  if (!r.regular) return irregular_result(std::move(report), r, command);
  report["point"] = point_json(pt);
  NonlinearConnection nc(space, NonlinearKind::Canonical);
  auto cartan = LinearConnectionPack::cartan(nc);
  auto berwald = LinearConnectionPack::berwald(space);
  const bool autonomous = autonomous_metric(space, sample_points(cfg, 4, seed));
  report["autonomous_metric"] = autonomous;
  const Dims& d = cfg.dims;
  if (command == "connection") {
    report["nonlinear"] = {
        {"M", tensor_json(DTensor({IndexSlot::vertical_upper(d), IndexSlot::temporal_lower(d)}, nc.M(pt)))},
        {"N", tensor_json(DTensor({IndexSlot::vertical_upper(d), IndexSlot::spatial_lower(d)}, nc.N(pt)))}};
    report["cartan"] = pack_json(cartan, pt);
    report["berwald"] = pack_json(berwald, pt);
  } else {
    const bool torsion = command == "torsion";
    auto tables = [&](const LinearConnectionPack& pack) {
      return table_json(torsion ? torsion_table(pack, pt) : curvature_table(pack, pt));
    };
    report["cartan"] = tables(cartan);
    report["berwald"] = tables(berwald);
    json audits;
    audits["cartan"] = audit_json(table_zero_audit(cartan, {pt}, kZeroTol));
    if (autonomous) audits["berwald"] = audit_json(table_zero_audit(berwald, {pt}, kZeroTol));
    report["zero_audit"] = audits;
  }
  CommandResult res;
  res.out = write_json(report);
  res.err = warnings_text(cfg);
  return res;
}

CommandResult cmd_extremal(const ProblemConfig& cfg, const CommandOptions& opt) {
  if (cfg.dims.p != 1) throw UsageError("extremal: needs p = 1 (use `residual` for p >= 2)");
  if (!cfg.solver) throw UsageError("extremal: config has no solver block");
  const auto& sc = *cfg.solver;
  Space space(cfg.lagrangian());
  auto traj = integrate_extremal(space, {sc.t0, sc.x, sc.y, sc.t_end, sc.dt});
  CommandResult res;
  res.exit = traj.aborted ? exit_code::irregular : exit_code::ok;
  const std::size_t n = cfg.dims.n;
  std::ostringstream err;
  err << warnings_text(cfg);
  err << "extremal: " << traj.states.size() << " states, max Euler-Lagrange residual "
      << format_number(traj.max_el_residual) << "\n";
  if (traj.aborted) err << "extremal: aborted at t = " << format_number(traj.states.back().t) << ": " << traj.abort_reason << "\n";
  res.err = err.str();
  if (opt.json) {
    const auto seed = seed_of(cfg, opt);
    json report = header("extremal", cfg, seed);
    const auto& last = traj.states.back();
    report["trajectory"] = {{"states", traj.states.size()},
                            {"aborted", traj.aborted},
                            {"abort_reason", traj.abort_reason},
                            {"final", {{"t", last.t}, {"x", last.x}, {"y", last.y}}},
                            {"max_el_residual", traj.max_el_residual},
                            {"action", action_value(space, traj)}};
    res.out = write_json(report);
    return res;
  }
  std::string out = "t";
  for (std::size_t i = 1; i <= n; ++i) out += ",x" + std::to_string(i);
  for (std::size_t i = 1; i <= n; ++i) out += ",y" + std::to_string(i);
  out += ",residual\n";
  for (const auto& s : traj.states) {
    std::vector<double> row{s.t};
    row.insert(row.end(), s.x.begin(), s.x.end());
    row.insert(row.end(), s.y.begin(), s.y.end());
    double r2 = 0;
    for (double r : el_residual(space, s)) r2 += r * r;
    row.push_back(std::sqrt(r2));
    out += csv_row(row);
  }
  res.out = std::move(out);
  return res;
}

CommandResult cmd_residual(const ProblemConfig& cfg, const CommandOptions& opt) {
  if (cfg.dims.p < 2) throw UsageError("residual: needs p >= 2 (use `extremal` for p = 1)");
  if (!cfg.grid) throw UsageError("residual: config has no grid block");
  const auto& gc = *cfg.grid;
  const Dims& d = cfg.dims;
  Space space(cfg.lagrangian());
  auto map = GridMap::sample(gc.shape, gc.box, [&](const std::vector<double>& t) {
    JetPoint pt(d);
    pt.t = t;
    std::vector<double> x;
    for (const auto& e : gc.map) x.push_back(dsl::eval(e, pt));
    return x;
  });
  auto r = harmonic_residual(space, map);
  CommandResult res;
  std::ostringstream err;
  err << warnings_text(cfg) << "residual: " << r.nodes.size() << " interior nodes, max " << format_number(r.max_norm)
      << ", rms " << format_number(r.rms_norm) << "\n";
  res.err = err.str();
  if (opt.json) {
    json report = header("residual", cfg, seed_of(cfg, opt));
    report["residual"] = {{"interior_nodes", r.nodes.size()},
                          {"max_norm", r.max_norm},
                          {"rms_norm", r.rms_norm},
                          {"action", action_value(space, map)}};
    res.out = write_json(report);
    return res;
  }
  std::string out;
  for (std::size_t a = 1; a <= d.p; ++a) out += (a > 1 ? ",t" : "t") + std::to_string(a);
  for (std::size_t i = 1; i <= d.n; ++i) out += ",x" + std::to_string(i);
  for (std::size_t i = 1; i <= d.n; ++i) out += ",residual" + std::to_string(i);
  out += "\n";
  for (std::size_t q = 0; q < r.nodes.size(); ++q) {
    auto row = map.node_time(r.nodes[q]);
    const auto& x = map.values[r.nodes[q]];
    row.insert(row.end(), x.begin(), x.end());
    row.insert(row.end(), r.residual[q].begin(), r.residual[q].end());
    out += csv_row(row);
  }
  res.out = std::move(out);
  return res;
}

CommandResult cmd_verify(const ProblemConfig& cfg, const CommandOptions& opt) {
  const auto seed = seed_of(cfg, opt);
  auto checks = verify_checks(cfg, seed);
  bool all = std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
  CommandResult res;
  res.exit = all ? exit_code::ok : exit_code::failed;
  res.err = warnings_text(cfg);
  if (opt.json) {
    json report = header("verify", cfg, seed);
    json list = json::array();
    for (const auto& c : checks)
      list.push_back({{"name", c.name}, {"value", c.value}, {"tolerance", c.tolerance}, {"passed", c.passed}, {"note", c.note}});
    report["checks"] = list;
    report["passed"] = all;
    res.out = write_json(report);
  } else {
    std::string out;
    for (const auto& c : checks) {
      out += (c.passed ? "PASS " : "FAIL ") + c.name + " value=" + format_number(c.value) +
             " tol=" + format_number(c.tolerance);
      if (!c.note.empty()) out += " (" + c.note + ")";
      out += "\n";
    }
    out += all ? "verify: all checks passed\n" : "verify: FAILED\n";
    res.out = std::move(out);
  }
  if (!all)
    for (const auto& c : checks)
      if (!c.passed) res.err += "failing invariant: " + c.name + " worst " + format_number(c.value) + "\n";
  return res;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

}  // namespace

std::vector<InvariantCheck> verify_checks(const ProblemConfig& cfg, std::uint64_t seed) {
  std::vector<InvariantCheck> out;
  auto add = [&](std::string name, double value, double tol, std::string note = {}) {
    out.push_back({std::move(name), value, tol, std::isfinite(value) && value <= tol, std::move(note)});
  };
  const Dims& d = cfg.dims;
  const std::size_t p = d.p, n = d.n;
  Space space(cfg.lagrangian());
  const auto pts = sample_points(cfg, std::min(cfg.count, kGeometryPoints), seed);

  {
    DiffConfig dc;
    dc.crosscheck_tol = cfg.tol.crosscheck;
    double worst = 0.0, schwartz = 0.0;
    std::string where;
    auto L = [&space](const auto& q) { return space.L(q); };
    for (const auto& pt : pts) {
      auto rep = fd_crosscheck(L, pt, dc);
      if (rep.max_rel >= worst) {
        worst = rep.max_rel;
        where = rep.worst;
      }
      schwartz = std::max(schwartz, schwartz_asymmetry(L, pt));
    }
    add("ad_fd_crosscheck", worst, cfg.tol.crosscheck, where);
    add("schwartz_symmetry", schwartz, kSchwartzTol);
  }
  {
    std::vector<std::vector<double>> times;
    for (const auto& pt : pts) times.push_back(pt.t);
    auto hc = check_temporal_metric(space.h(), times);
    add("temporal_metric", hc.ok ? 0.0 : 1.0, 0.0, hc.diagnostic);
  }
  for (const auto& w : cfg.warnings) add("text_symmetry", 0.0, 0.0, w);

  auto reg = assess(space, cfg, seed);
  add("kronecker_regularity", reg.verdict.is_kronecker ? reg.verdict.max_block_residual : HUGE_VAL, cfg.tol.regularity,
      reg.verdict.diagnostic);
  if (p >= 2 && reg.verdict.is_kronecker) {
    add("velocity_independent_g", reg.verdict.velocity_dependent_g ? 1.0 : 0.0, 0.0);
    add("decomposition_roundtrip", reg.decomposition ? reg.decomposition->max_reassembly_residual : reg.decomposition_residual,
        kDecompositionTol, reg.decomposition_error);
  }
  if (!cfg.lagrangian().builtin() && cfg.lagrangian().declared()) {
    add("declared_components", declared_roundtrip_residual(space, cfg.box, cfg.count, seed), kDecompositionTol);
  }
  if (!reg.regular) {
    out.push_back({"geometry", 0.0, 0.0, false, "skipped: Lagrangian is not regular"});
    return out;
  }

  double htrace = 0.0, parts = 0.0, nderiv = 0.0, compat = 0.0, sym = 0.0, antisym = 0.0;
  NonlinearConnection nc(space, NonlinearKind::Canonical);
  auto cartan = LinearConnectionPack::cartan(nc);
  for (const auto& pt : pts) {
    auto sp = space.spray(pt);
    auto GG = space.spatial_spray(pt);
    Matrix hu = space.h().upper<double>(pt.t);
    for (std::size_t l = 0; l < n; ++l) {
      double tr = 0.0;
      for (std::size_t a = 0; a < p; ++a)
        for (std::size_t b = 0; b < p; ++b) tr += hu(a, b) * GG[(l * p + a) * p + b];
      htrace = std::max(htrace, std::abs(tr - sp.G[l]));
      parts = std::max(parts, std::abs(sp.S[l] + sp.H[l] + sp.J[l] - sp.G[l]));
    }
    nderiv = std::max(nderiv, max_abs_diff(space.canonical_N(pt), space.spray_derivative_N(pt)));
    compat = std::max(compat, metric_compatibility(cartan, pt).max());
    auto L = cartan.L(pt);
    auto C = cartan.C(pt);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) {
          sym = std::max(sym, std::abs(L[(i * n + j) * n + k] - L[(i * n + k) * n + j]));
          for (std::size_t c = 0; c < p; ++c)
            sym = std::max(sym, std::abs(C[((i * n + j) * n + k) * p + c] - C[((i * n + k) * n + j) * p + c]));
        }
    auto cur = curvature_table(cartan, pt, false);
    const auto& R = cur.at("R_xx");
    for (std::size_t q = 0; q < R.size(); ++q) {
      auto idx = R.unravel(q);
      antisym = std::max(antisym, std::abs(R.data()[q] + R({idx[0], idx[1], idx[3], idx[2]})));
    }
  }
  add("h_trace_identity", htrace, kIdentityTol);
  add("spray_decomposition", parts, kIdentityTol);
  add("nonlinear_connection_from_spray", nderiv, kIdentityTol);
  add("cartan_metric_compatibility", compat, cfg.tol.compatibility);
  add("cartan_symmetry", sym, kSymmetryTol);
  add("curvature_antisymmetry", antisym, kIdentityTol);

  const bool autonomous = autonomous_metric(space, pts);
  auto ca = table_zero_audit(cartan, pts, kZeroTol);
  add("zero_audit_cartan", ca.max_abs, kZeroTol, ca.worst);
  if (autonomous) {
    auto berwald = LinearConnectionPack::berwald(space);
    auto ba = table_zero_audit(berwald, pts, kZeroTol);
    add("zero_audit_berwald", ba.max_abs, kZeroTol, ba.worst);
  }

  // Classical reduction: one flat time and a metric on x alone.
  const auto& model = cfg.lagrangian();
  if (p == 1 && space.h().is_flat() && autonomous && model.kind() == LagrangianKind::Harmonic) {
    double nred = 0.0, lred = 0.0;
    auto gf = [&space](const auto& q) { return space.g(q); };
    for (const auto& pt : pts) {
      auto gam = spatial_christoffel(gf, pt);
      auto N = space.canonical_N(pt);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          double want = 0.0;
          for (std::size_t k = 0; k < n; ++k) want += gam[(i * n + j) * n + k] * pt.vel(k, 0);
          nred = std::max(nred, std::abs(N[i * n + j] - want));
        }
      lred = std::max(lred, max_abs_diff(cartan.L(pt), gam));
    }
    add("reduction_nonlinear_connection", nred, kReductionTol);
    add("reduction_levi_civita", lred, kReductionTol);
  }
  return out;
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"analyze", "connection", "torsion", "curvature", "extremal", "residual", "verify"};
  return names;
}

CommandResult run_command(const std::string& name, const ProblemConfig& cfg, const CommandOptions& opt) {
  try {
    if (name == "analyze") return cmd_analyze(cfg, opt);
    if (name == "connection" || name == "torsion" || name == "curvature") return cmd_geometry(name, cfg, opt);
    if (name == "extremal") return cmd_extremal(cfg, opt);
    if (name == "residual") return cmd_residual(cfg, opt);
    if (name == "verify") return cmd_verify(cfg, opt);
    throw UsageError("unknown command '" + name + "'");
  } catch (const UsageError& e) {
    return {exit_code::usage, "", std::string(e.what()) + "\n"};
  } catch (const ConfigError& e) {
    return {exit_code::usage, "", std::string(e.what()) + "\n"};
  } catch (const DegeneracyError& e) {
    return {exit_code::irregular, "", name + ": " + e.what() + "\n"};
  }
}

}  // namespace jetlag
