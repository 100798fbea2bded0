#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "upade/commands.hpp"

namespace {

using upade::Complex;
using upade::TruncatedSeries;
using upade::cli::json;

TruncatedSeries geometric(int order) { return TruncatedSeries(0.0, std::vector<Complex>(static_cast<std::size_t>(order) + 1, 1.0)); }

TruncatedSeries exp_series(int order) {
  std::vector<Complex> a(static_cast<std::size_t>(order) + 1);
  double f = 1.0;
  for (int v = 0; v <= order; ++v) {
    if (v > 0) f *= v;
    a[static_cast<std::size_t>(v)] = 1.0 / f;
  }
  return TruncatedSeries(0.0, a);
}

std::vector<Complex> coeffs(const json& j) {
  std::vector<Complex> out;
  for (const auto& c : j) out.push_back(upade::io::complex_from_json(c));
  return out;
}

TEST(CmdPade, GeometricZeroOne) {
  const auto res = upade::cli::cmd_pade(geometric(8), {{0, 1}, {}, std::nullopt});
  EXPECT_EQ(res.exit_code, 0);
  const auto num = coeffs(res.output["approximant"]["num"]);
  const auto den = coeffs(res.output["approximant"]["den"]);
  ASSERT_EQ(num.size(), 1u);
  ASSERT_EQ(den.size(), 2u);
  EXPECT_EQ(num[0], Complex(1.0));
  EXPECT_EQ(den[0], Complex(1.0));
  EXPECT_EQ(den[1], Complex(-1.0));
  EXPECT_LT(res.output["route_agreement"].get<double>(), 1e-12);
  EXPECT_TRUE(res.output["membership"]["member"].get<bool>());
  EXPECT_EQ(res.output["near_common_zero"], 1.0);
}

TEST(CmdPade, QZeroEchoesPartialSum) {
  const auto s = exp_series(6);
  const auto res = upade::cli::cmd_pade(s, {{3, 0}, {}, std::nullopt});
  const auto num = coeffs(res.output["approximant"]["num"]);
  ASSERT_EQ(num.size(), 4u);
  for (int v = 0; v <= 3; ++v) EXPECT_EQ(num[static_cast<std::size_t>(v)], s.coeff(v));
  EXPECT_EQ(coeffs(res.output["approximant"]["den"]).size(), 1u);
  EXPECT_TRUE(res.output["poles"]["poles"].empty());
}

TEST(CmdPade, ShortSeriesReportsRequiredOrder) {
  const TruncatedSeries s(0.0, {1.0, 1.0, 1.0});
  try {
    (void)upade::cli::cmd_pade(s, {{2, 2}, {}, std::nullopt});
    FAIL() << "expected InsufficientOrder";
  } catch (const upade::InsufficientOrder& e) {
    EXPECT_EQ(e.required(), 4);
    const json j = upade::cli::error_json(e);
    EXPECT_EQ(j["required"], 4);
    EXPECT_EQ(j["index"], json::parse("[2,2]"));
    EXPECT_EQ(j["operation"], "cmd_pade");
    EXPECT_EQ(upade::cli::exit_code_for(e), upade::cli::kInputError);
  }
}

TEST(CmdPade, NonMemberExitsWithDegeneracy) {
  const auto res = upade::cli::cmd_pade(geometric(8), {{1, 2}, {}, std::nullopt});
  EXPECT_EQ(res.exit_code, upade::cli::kNumericalDegeneracy);
  EXPECT_FALSE(res.output["membership"]["member"].get<bool>());
  EXPECT_TRUE(res.output.contains("linear_solve_error"));
  EXPECT_FALSE(res.output.contains("approximant"));
}

TEST(CmdPade, SeparationOnRequestedRegion) {
  const auto region = upade::make_region(upade::DiscSpec{0.0, 2.0, 0.1}, "D2");
  const auto res = upade::cli::cmd_pade(geometric(8), {{0, 1}, {}, region});
  EXPECT_EQ(res.output["separation_bound"]["region"], "D2");
  EXPECT_GE(res.output["separation_bound"]["min"].get<double>(), 1.0);
}

TEST(CmdTable, GeometricPattern) {
  const auto res = upade::cli::cmd_table(geometric(6), 3, 3, {});
  const auto& m = res.output["member"];
  ASSERT_EQ(m.size(), 4u);
  for (int p = 0; p <= 3; ++p)
    for (int q = 0; q <= 3; ++q) EXPECT_EQ(m[p][q].get<bool>(), !(p >= 1 && q >= 2)) << p << "," << q;
  EXPECT_EQ(res.output["cells"][1][2]["det"], json::parse("[0.0, 0.0]"));
}

TEST(CmdTable, ExpTwoByTwoAllMembers) {
  const auto res = upade::cli::cmd_table(exp_series(4), 1, 1, {});
  for (const auto& row : res.output["member"])
    for (const auto& cell : row) EXPECT_TRUE(cell.get<bool>());
}

TEST(CmdTable, QZeroColumnAllMembersWithPoles) {
  const auto res = upade::cli::cmd_table(exp_series(8), 4, 0, {}, true);
  for (const auto& row : res.output["member"]) EXPECT_TRUE(row[0].get<bool>());
  EXPECT_FALSE(res.output["cells"][0][0].contains("poles"));
}

TEST(CmdTable, InsufficientOrder) { EXPECT_THROW(upade::cli::cmd_table(geometric(3), 2, 2, {}), upade::InsufficientOrder); }

TEST(CmdPoles, GeometricPolesAtOne) {
  std::vector<upade::PadeIndex> fam;
  for (int p = 0; p <= 5; ++p) fam.push_back({p, 1});
  const auto res = upade::cli::cmd_poles(geometric(12), fam, {});
  int n = 0;
  for (const auto& e : res.output["trajectory"]) {
    for (const auto& z : e["poles"]["poles"]) {
      EXPECT_LT(std::abs(upade::io::complex_from_json(z) - 1.0), 1e-8);
      ++n;
    }
  }
  EXPECT_EQ(n, 6);
  ASSERT_EQ(res.output["clusters"].size(), 1u);
  EXPECT_EQ(res.output["clusters"][0]["count"], 6);
  EXPECT_TRUE(res.output["clusters"][0]["stable"].get<bool>());
}

TEST(CmdPoles, LogLikeSeriesSingleRealTrajectory) {
  // sum z^v / (v + 1) = -log(1 - z) / z; values recorded, only shape asserted.
  std::vector<Complex> a(16);
  for (int v = 0; v < 16; ++v) a[static_cast<std::size_t>(v)] = 1.0 / (v + 1);
  std::vector<upade::PadeIndex> fam;
  for (int p = 0; p <= 8; ++p) fam.push_back({p, 1});
  const auto res = upade::cli::cmd_poles(TruncatedSeries(0.0, a), fam, {});
  for (const auto& e : res.output["trajectory"]) {
    ASSERT_TRUE(e.contains("poles"));
    ASSERT_EQ(e["poles"]["poles"].size(), 1u);
    const Complex z = upade::io::complex_from_json(e["poles"]["poles"][0]);
    EXPECT_LT(std::abs(z.imag()), 1e-12);
    EXPECT_GT(z.real(), 1.0);
    RecordProperty("pole_p" + std::to_string(e["index"][0].get<int>()), std::to_string(z.real()));
  }
}

TEST(CmdPoles, EntireSeriesQZeroHasNoPoles) {
  const auto res = upade::cli::cmd_poles(exp_series(10), {{2, 0}, {5, 0}}, {});
  for (const auto& e : res.output["trajectory"]) EXPECT_TRUE(e["poles"]["poles"].empty());
  EXPECT_TRUE(res.output["clusters"].empty());
}

TEST(CmdPoles, PerIndexErrorsRecordedInline) {
  const auto res = upade::cli::cmd_poles(geometric(6), {{0, 1}, {1, 2}, {10, 1}}, {});
  const auto& t = res.output["trajectory"];
  ASSERT_EQ(t.size(), 3u);
  EXPECT_TRUE(t[0].contains("poles"));
  EXPECT_EQ(t[1]["error"]["kind"], "SingularSystem");
  EXPECT_EQ(t[2]["error"]["kind"], "InsufficientOrder");
  EXPECT_EQ(res.exit_code, 0);
}

TEST(ClusterPoles, GroupsWithinRadius) {
  const auto c = upade::cli::cluster_poles({{{1, 1}, 1.0}, {{2, 1}, 1.01}, {{3, 1}, 2.0}});
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c[0].indices.size(), 2u);
  EXPECT_EQ(c[1].indices.size(), 1u);
}

upade::io::ScheduleConfig small_config(int s2 = 100) {
  return upade::io::schedule_from_json(json{
      {"L", {{"label", "L"}, {"kind", "points"}, {"points", json::parse("[[0,0],[0.1,0.05]]")}}},
      {"Lprime", {{"label", "Lprime"}, {"kind", "disc"}, {"center", json::parse("[0,0]")}, {"radius", 0.5}, {"step", 0.05}}},
      {"family", json::parse("[[6,2],[12,2],[18,2],[24,2],[30,2],[36,2],[42,2],[48,2],[54,2],[60,2]]")},
      {"demands", json::array({{{"target", {{"coeffs", json::parse("[[1,0]]")}}},
                                {"K", {{"label", "K"}, {"kind", "segment"}, {"z0", json::parse("[2,0]")}, {"z1", json::parse("[3,0]")}, {"n_points", 11}}},
                                {"s", 100}},
                               {{"target", {{"coeffs", json::parse("[[0,0],[0,0],[1,0]]")}}},
                                {"K", {{"label", "K"}, {"kind", "segment"}, {"z0", json::parse("[2,0]")}, {"z1", json::parse("[3,0]")}, {"n_points", 11}}},
                                {"s", s2}}})}});
}

TEST(CmdUniversal, TwoStagesPassWithPlotData) {
  const auto res = upade::cli::cmd_universal(small_config());
  ASSERT_EQ(res.exit_code, 0) << res.output.dump(1).substr(0, 2000);
  EXPECT_TRUE(res.output["result"]["all_pass"].get<bool>());
  ASSERT_EQ(res.output["plot_data"].size(), 2u);
  for (const auto& stage : res.output["plot_data"]) {
    EXPECT_EQ(stage["K"]["samples"].size(), 11u);
    for (const auto& s : stage["K"]["samples"]) EXPECT_LT(s["err"].get<double>(), 0.01);
    for (const auto& s : stage["Lprime"]["samples"]) EXPECT_LT(s["err"].get<double>(), 0.01);
  }
  for (const auto& st : res.output["result"]["stages"]) {
    const auto& c = st["certificate"];
    EXPECT_EQ(c["tool_version"], upade::io::kToolVersion);
    EXPECT_GE(c["audit"]["fit_error_on_K"].get<double>() + c["audit"]["perturbation_bound_on_K"].get<double>() +
                  c["audit"]["route_discrepancy_on_K"].get<double>(),
              c["err_on_K"].get<double>());
  }
}

TEST(CmdUniversal, ByteIdenticalReruns) {
  EXPECT_EQ(upade::cli::cmd_universal(small_config()).output.dump(2),
            upade::cli::cmd_universal(small_config()).output.dump(2));
}

TEST(CmdUniversal, UnreachableStageExitsTwoWithDiagnostics) {
  const auto res = upade::cli::cmd_universal(small_config(10000000));
  EXPECT_EQ(res.exit_code, upade::cli::kCertificationFailure);
  EXPECT_EQ(res.output["error"]["kind"], "BudgetUnreachable");
  EXPECT_NE(res.output["error"]["operation"].get<std::string>().find("stage 2"), std::string::npos);
}

TEST(ExitCodes, Mapping) {
  using namespace upade;
  EXPECT_EQ(cli::exit_code_for(FamilyExhausted(3, {"x", {}, {}})), cli::kCertificationFailure);
  EXPECT_EQ(cli::exit_code_for(SingularSystem("s", {"x", {}, {}})), cli::kNumericalDegeneracy);
  EXPECT_EQ(cli::exit_code_for(NearPole("s", {"x", {}, {}})), cli::kNumericalDegeneracy);
  EXPECT_EQ(cli::exit_code_for(InvalidArgument("s", {"x", {}, {}})), cli::kInputError);
}

TEST(WriteAtomic, ReplacesTargetWithoutLeftovers) {
  const auto dir = std::filesystem::temp_directory_path() / "upade_write_atomic_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "out.json";
  upade::cli::write_atomic(path, "first\n");
  upade::cli::write_atomic(path, "second\n");
  std::ifstream f(path);
  std::string line;
  std::getline(f, line);
  EXPECT_EQ(line, "second");
  EXPECT_FALSE(std::filesystem::exists(dir / "out.json.tmp"));
  std::filesystem::remove_all(dir);
}

}  // namespace
