#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "jetlag/commands.hpp"
#include "jetlag/config.hpp"
#include "jetlag/report.hpp"

using namespace jetlag;

namespace {

std::string fixture(const std::string& name) {
  std::ifstream in(std::string(JETLAG_FIXTURES) + "/" + name);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

const char* kMinimal = R"({"dims": {"p": 1, "n": 1},
  "lagrangian": {"kind": "harmonic", "g_entries": [["1"]]},
  "temporal_metric": {"kind": "flat", "signature": [1, 0]}})";

std::string with(const std::string& key_path_json) {
  // Merge a patch into the minimal config.
  auto j = nlohmann::json::parse(kMinimal);
  j.merge_patch(nlohmann::json::parse(key_path_json));
  return j.dump();
}

}  // namespace

TEST(Config, MinimalDefaults) {
  auto cfg = parse_config(kMinimal);
  EXPECT_EQ(cfg.dims, Dims(1, 1));
  EXPECT_EQ(cfg.count, 64u);
  EXPECT_EQ(cfg.seed, 0u);
  EXPECT_DOUBLE_EQ(cfg.tol.regularity, 1e-6);
  EXPECT_DOUBLE_EQ(cfg.tol.compatibility, 1e-7);
  EXPECT_DOUBLE_EQ(cfg.tol.crosscheck, 1e-5);
  EXPECT_FALSE(cfg.solver);
  EXPECT_FALSE(cfg.grid);
  EXPECT_EQ(cfg.hash.size(), 64u);
  EXPECT_EQ(cfg.box.x.size(), 1u);
  EXPECT_DOUBLE_EQ(cfg.box.x[0].lo, -1.0);
}

TEST(Config, RejectsUnknownFieldsEverywhere) {
  for (const char* patch : {R"({"extra": 1})", R"({"dims": {"q": 1}})", R"({"lagrangian": {"colour": "x"}})",
                            R"({"temporal_metric": {"foo": 1}})", R"({"sampling": {"bar": 1}})",
                            R"({"tolerances": {"baz": 1}})", R"({"solver": {"t_end": 1, "dt": 0.1, "initial": {"x": [0], "y": [1], "z": 0}}})",
                            R"({"grid": {"shape": [5], "box": [[0, 1]], "map": ["t1"], "extra": 0}})"}) {
    EXPECT_THROW(parse_config(with(patch)), ConfigError) << patch;
  }
}

TEST(Config, RejectsMalformedAndInvalid) {
  EXPECT_THROW(parse_config("{"), ConfigError);
  EXPECT_THROW(parse_config("[]"), ConfigError);
  EXPECT_THROW(parse_config(fixture("malformed.json")), ConfigError);
  EXPECT_THROW(parse_config(fixture("unknown_field.json")), ConfigError);
  for (const char* patch :
       {R"({"dims": {"p": 0}})", R"({"dims": {"p": 1.5}})", R"({"dims": {"n": -1}})", R"({"lagrangian": {"kind": "quadratic"}})",
        R"({"lagrangian": {"g_entries": [["1", "0"]]}})", R"({"lagrangian": {"g_entries": [["x1 +"]]}})",
        R"({"lagrangian": {"g_entries": [["v1_1"]]}})", R"({"lagrangian": {"F": "x1"}})",
        R"({"temporal_metric": {"signature": [0, 0]}})", R"({"temporal_metric": {"kind": "expression"}})",
        R"({"temporal_metric": {"kind": "expression", "entries": [["x1"]]}})", R"({"sampling": {"box": [1, 0]}})",
        R"({"sampling": {"box": [[0, 1]]}})", R"({"sampling": {"count": 0}})", R"({"sampling": {"seed": -3}})",
        R"({"tolerances": {"regularity": -1}})", R"({"solver": {"t_end": 1, "dt": 0, "initial": {"x": [0], "y": [1]}}})",
        R"({"solver": {"t_end": 1, "dt": 0.1, "initial": {"x": [0, 1], "y": [1]}}})",
        R"({"grid": {"shape": [4], "box": [[0, 1]], "map": ["t1"]}})", R"({"grid": {"shape": [5], "box": [[0, 1]], "map": ["x1"]}})"}) {
    EXPECT_THROW(parse_config(with(patch)), ConfigError) << patch;
  }
}

TEST(Config, ExpressionWithDeclaredComponents) {
  auto cfg = parse_config(fixture("mis_signed_u_p2.json"));
  EXPECT_EQ(cfg.lagrangian().kind(), LagrangianKind::Expression);
  ASSERT_TRUE(cfg.lagrangian().declared());
  EXPECT_TRUE(cfg.lagrangian().declared()->has_U());
}

TEST(Config, AsymmetricTextWarns) {
  auto cfg = parse_config(fixture("asymmetric_g_p2.json"));
  ASSERT_EQ(cfg.warnings.size(), 1u);
  EXPECT_NE(cfg.warnings[0].find("g_entries"), std::string::npos);
  EXPECT_TRUE(parse_config(fixture("rich_electro_p2.json")).warnings.empty());
}

TEST(Config, HashIgnoresFormattingButNotContent) {
  auto a = parse_config(kMinimal);
  auto b = parse_config(nlohmann::json::parse(kMinimal).dump(4));
  EXPECT_EQ(a.hash, b.hash);
  auto c = parse_config(with(R"({"sampling": {"seed": 9}})"));
  EXPECT_NE(a.hash, c.hash);
}

TEST(Config, Sha256KnownVectors) {
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Config, PointParsing) {
  Dims d(2, 2);
  auto pt = parse_point("t=0.1,0.2;x=1,2;v=3,4,5,6", d);
  EXPECT_EQ(pt.t, (std::vector<double>{0.1, 0.2}));
  EXPECT_EQ(pt.v, (std::vector<double>{3, 4, 5, 6}));
  EXPECT_DOUBLE_EQ(pt.vel(1, 0), 5.0);
  auto partial = parse_point("x=1,2", d);
  EXPECT_EQ(partial.t, (std::vector<double>{0, 0}));
  for (const char* bad : {"t=1", "q=1,2", "t=1,2;t=1,2", "x=1,abc", "x1,2", "x=1,2,3", "x=nan,1"})
    EXPECT_THROW(parse_point(bad, d), ConfigError) << bad;
}

TEST(Report, SeventeenDigits) {
  EXPECT_EQ(format_number(0.1), "0.10000000000000001");
  EXPECT_EQ(format_number(1.0), "1");
  EXPECT_EQ(format_number(std::nan("")), "null");
  nlohmann::json j = {{"b", 0.1}, {"a", {1, 2.5}}};
  EXPECT_EQ(write_json(j, 0), "{\"a\":[1,2.5],\"b\":0.10000000000000001}\n");
  auto back = nlohmann::json::parse(write_json(j));
  EXPECT_EQ(back["b"].get<double>(), 0.1);
}

TEST(Report, CommandsAreDeterministic) {
  auto cfg = parse_config(fixture("rich_electro_p2.json"));
  for (const char* cmd : {"analyze", "connection", "curvature"}) {
    auto a = run_command(cmd, cfg, {});
    auto b = run_command(cmd, cfg, {});
    EXPECT_EQ(a.exit, 0) << cmd << a.err;
    EXPECT_EQ(a.out, b.out) << cmd;
  }
  CommandOptions other;
  other.seed = 99;
  EXPECT_NE(run_command("analyze", cfg, {}).out, run_command("analyze", cfg, other).out);
}

TEST(Report, ReportCarriesProvenance) {
  auto cfg = parse_config(fixture("flat_harmonic_p2.json"));
  auto res = run_command("analyze", cfg, {});
  auto j = nlohmann::json::parse(res.out);
  EXPECT_EQ(j["config_hash"], cfg.hash);
  EXPECT_EQ(j["version"], kVersion);
  EXPECT_EQ(j["seed"], 1);
  EXPECT_TRUE(j["regularity"]["is_kronecker"].get<bool>());
  EXPECT_EQ(j["regularity"]["samples"].size(), 16u);
}

TEST(Commands, ConnectionTables) {
  CommandOptions opt;
  opt.point = "t=0.1,0.2;x=0.3,0.4;v=0.5,0.6,0.7,0.8";
  auto j = nlohmann::json::parse(run_command("connection", parse_config(fixture("autonomous_electro_p2.json")), opt).out);
  for (const char* fam : {"G", "C"})
    for (double v : j["cartan"][fam]["data"]) EXPECT_EQ(v, 0.0) << fam;
  EXPECT_EQ(j["cartan"]["C"]["valence"], nlohmann::json({"SU", "SL", "VL"}));
  auto flat = nlohmann::json::parse(run_command("connection", parse_config(fixture("flat_harmonic_p2.json")), opt).out);
  for (const char* pack : {"cartan", "berwald"})
    for (const auto& [fam, t] : flat[pack].items())
      for (double v : t["data"]) EXPECT_EQ(v, 0.0) << pack << fam;
  for (const char* part : {"M", "N"})
    for (double v : flat["nonlinear"][part]["data"]) EXPECT_EQ(v, 0.0);
}

TEST(Commands, SphereNonlinearConnectionIsLeviCivita) {
  CommandOptions opt;
  opt.point = "t=0;x=0.9,0.3;v=0.4,-0.7";
  auto j = nlohmann::json::parse(run_command("connection", parse_config(fixture("sphere_p1.json")), opt).out);
  const auto& N = j["nonlinear"]["N"]["data"];
  // gamma^1_22 = -sin cos, gamma^2_12 = gamma^2_21 = cot
  const double s = std::sin(0.9), c = std::cos(0.9);
  EXPECT_NEAR(N[0].get<double>(), 0.0, 1e-12);
  EXPECT_NEAR(N[1].get<double>(), -s * c * -0.7, 1e-8);
  EXPECT_NEAR(N[2].get<double>(), c / s * -0.7, 1e-8);
  EXPECT_NEAR(N[3].get<double>(), c / s * 0.4, 1e-8);
}

TEST(Commands, TorsionAndCurvatureAudits) {
  auto cfg = parse_config(fixture("autonomous_electro_p2.json"));
  for (const char* cmd : {"torsion", "curvature"}) {
    auto res = run_command(cmd, cfg, {});
    ASSERT_EQ(res.exit, 0) << res.err;
    auto j = nlohmann::json::parse(res.out);
    EXPECT_TRUE(j["zero_audit"]["cartan"]["passed"].get<bool>()) << cmd;
    EXPECT_TRUE(j["zero_audit"]["berwald"]["passed"].get<bool>()) << cmd;
  }
  auto irregular = run_command("torsion", parse_config(fixture("quartic_p2.json")), {});
  EXPECT_EQ(irregular.exit, exit_code::irregular);
}

TEST(Commands, ExtremalAndResidual) {
  auto line = run_command("extremal", parse_config(fixture("line_p1.json")), {});
  EXPECT_EQ(line.exit, 0);
  EXPECT_EQ(line.out.substr(0, line.out.find('\n')), "t,x1,x2,y1,y2,residual");
  EXPECT_NE(line.out.find("\n1,1,2,1,2,0\n"), std::string::npos);
  CommandOptions js;
  js.json = true;
  auto sphere = nlohmann::json::parse(run_command("extremal", parse_config(fixture("sphere_p1.json")), js).out);
  EXPECT_NEAR(sphere["trajectory"]["final"]["x"][1].get<double>(), 1.0, 1e-10);
  EXPECT_LE(sphere["trajectory"]["max_el_residual"].get<double>(), 1e-6);
  auto res = run_command("residual", parse_config(fixture("affine_grid_p2.json")), js);
  EXPECT_LT(nlohmann::json::parse(res.out)["residual"]["max_norm"].get<double>(), 1e-10);
  EXPECT_EQ(run_command("residual", parse_config(fixture("sphere_p1.json")), {}).exit, exit_code::usage);
  EXPECT_EQ(run_command("residual", parse_config(fixture("flat_harmonic_p2.json")), {}).exit, exit_code::usage);
}

TEST(Commands, VerifyOutcomes) {
  auto flat = run_command("verify", parse_config(fixture("flat_harmonic_p2.json")), {});
  EXPECT_EQ(flat.exit, 0) << flat.out;
  auto asym = run_command("verify", parse_config(fixture("asymmetric_g_p2.json")), {});
  EXPECT_EQ(asym.exit, 0) << asym.out;
  EXPECT_NE(asym.err.find("warning"), std::string::npos);
  auto bad = run_command("verify", parse_config(fixture("mis_signed_u_p2.json")), {});
  EXPECT_EQ(bad.exit, exit_code::failed);
  EXPECT_NE(bad.out.find("FAIL declared_components"), std::string::npos);
  EXPECT_EQ(run_command("verify", parse_config(fixture("correct_u_p2.json")), {}).exit, 0);
  EXPECT_EQ(run_command("nonsense", parse_config(fixture("flat_harmonic_p2.json")), {}).exit, exit_code::usage);
}
