#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gini/distributions.hpp"
#include "gini/error.hpp"
#include "gini/io.hpp"
#include "gini/ustat.hpp"

namespace fs = std::filesystem;

namespace {
fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "gini_io_tests";
  fs::create_directories(dir);
  return dir / name;
}

void write(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run(const std::string& args, const fs::path& out) {
  const std::string cmd = std::string(GINI_CLI) + " " + args + " > " + out.string() + " 2>&1";
  const int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}
}  // namespace

TEST(Csv, HeaderDetectionAndErrors) {
  std::istringstream with("x,y\n1,2\n3,4\n");
  auto t = gini::parse_csv(with);
  EXPECT_EQ(t.header.size(), 2u);
  EXPECT_EQ(t.rows(), 2u);
  std::istringstream without("1,2\n3,4\n");
  EXPECT_TRUE(gini::parse_csv(without).header.empty());
  std::istringstream empty("");
  EXPECT_THROW(gini::parse_csv(empty), gini::ParseError);
  std::istringstream bad("1,2\n3,abc\n");
  try {
    gini::parse_csv(bad);
    FAIL();
  } catch (const gini::ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.column(), 2u);
  }
  std::istringstream ragged("1,2\n3\n");
  EXPECT_THROW(gini::parse_csv(ragged), gini::ParseError);
  EXPECT_THROW(gini::read_csv("/nonexistent/file.csv"), gini::FileNotFound);
}

TEST(Csv, Banknote) {
  std::istringstream in("1,2,3,4,0\n5,6,7,8,1\n9,1,2,3,0\n");
  const auto b = gini::split_banknote(gini::parse_csv(in));
  EXPECT_EQ(b.genuine.rows(), 2u);
  EXPECT_EQ(b.forged.rows(), 1u);
  EXPECT_EQ(b.warnings.size(), 2u);
  EXPECT_EQ(gini::column_index(b.genuine, "sw"), 1u);
  std::istringstream badclass("1,2,3,4,2\n");
  EXPECT_THROW(gini::split_banknote(gini::parse_csv(badclass)), gini::ParseError);
}

TEST(Csv, RoundTripIsBitwise) {
  const auto s = gini::sample(gini::DistributionSpec::t({1.0, 0.3, 2.0}, 5.0), 300, 17);
  const auto p = scratch("roundtrip.csv");
  gini::write_two_column(p.string(), s);
  const auto t = gini::read_csv(p.string());
  const auto back = gini::select_columns(t, 0, 1);
  ASSERT_EQ(back.size(), s.size());
  for (std::size_t i = 0; i < s.size(); ++i) EXPECT_EQ(back[i], s[i]);
  EXPECT_EQ(gini::gini_gamma(back), gini::gini_gamma(s));
}

TEST(Config, ParsesAndNamesBadKeys) {
  std::istringstream ok(
      "kind = equality\nfamily = normal_lognormal\nrho = 0.9\ns11 = 4\ns22 = 1\nn = 200\n"
      "methods = jel, ajel, jackknife\nlevels = 0.90, 0.95\nreplications = 10\nrepeats = 2\n");
  const auto c = gini::parse_study_config(ok);
  EXPECT_EQ(c.kind, gini::StudyKind::Equality);
  EXPECT_EQ(c.methods.size(), 3u);
  EXPECT_NEAR(c.dist.scatter.s12, 0.9 * 2.0, 1e-15);
  EXPECT_EQ(c.replications, 10u);

  auto key_of = [](const std::string& text) {
    std::istringstream in(text);
    try {
      gini::parse_study_config(in);
    } catch (const gini::ConfigInvalid& e) {
      return e.key();
    }
    return std::string("none");
  };
  EXPECT_EQ(key_of("levels = 1.5\n"), "levels");
  EXPECT_EQ(key_of("family = cauchy\n"), "family");
  EXPECT_EQ(key_of("colour = red\n"), "colour");
  EXPECT_EQ(key_of("n = -3\n"), "n");
}

TEST(Json, SixDecimalsAndNull) {
  EXPECT_EQ(gini::json_number(0.123456789).dump(), "0.123457");
  EXPECT_TRUE(gini::json_number(std::numeric_limits<double>::infinity()).is_null());
  EXPECT_EQ(gini::json_number(-0.0000001).dump(), "0.0");
}

TEST(Report, TextTableWithoutColour) {
  gini::StudyReport r;
  r.replications = 10;
  r.outer_repeats = 2;
  r.cells.push_back({gini::Method::JEL, 0.95, 0.95, 0.003, 0.171, 0.0});
  const auto text = gini::format_report_text(r, false);
  EXPECT_NE(text.find(".950(.003) .171(.000)"), std::string::npos);
  EXPECT_EQ(text.find('\033'), std::string::npos);
}

TEST(Cli, EstimateCiTestRegionAndExitCodes) {
  const auto s4 = scratch("s4.csv");
  write(s4, "x,y\n1,2\n2,1\n3,4\n4,3\n");
  const auto out = scratch("out.txt");
  ASSERT_EQ(run("estimate --file " + s4.string(), out), 0);
  const auto est = nlohmann::json::parse(slurp(out));
  EXPECT_DOUBLE_EQ(est["gamma_xy"].get<double>(), 0.6);
  EXPECT_DOUBLE_EQ(est["gamma_yx"].get<double>(), 0.6);
  EXPECT_DOUBLE_EQ(est["delta"].get<double>(), 0.0);
  EXPECT_EQ(est["n"].get<int>(), 4);

  const auto empty = scratch("empty.csv");
  write(empty, "");
  EXPECT_EQ(run("estimate --file " + empty.string(), out), 2);
  EXPECT_EQ(run("estimate --file /nonexistent.csv", out), 2);
  EXPECT_EQ(run("ci --file " + s4.string() + " --method bogus", out), 1);
  EXPECT_EQ(run("frobnicate", out), 1);

  const auto s3 = scratch("s3.csv");
  write(s3, "1,1\n2,2\n3,3\n4,4\n5,5\n");
  ASSERT_EQ(run("ci --file " + s3.string() + " --method jel", out), 0);
  const auto ci = nlohmann::json::parse(slurp(out));
  EXPECT_TRUE(ci["upper_clipped"].get<bool>());
  EXPECT_DOUBLE_EQ(ci["upper"].get<double>(), 1.0);

  const auto n1 = scratch("n1.csv");
  gini::write_two_column(n1.string(), gini::sample(gini::DistributionSpec::normal({1, 0.5, 1}), 50, 1));
  ASSERT_EQ(run("ci --file " + n1.string() + " --method pearson --family normal", out), 0);
  EXPECT_EQ(nlohmann::json::parse(slurp(out))["method"], "Pearson");
  ASSERT_EQ(run("test --mode two_sample --file " + n1.string() + " --file2 " + n1.string(), out), 0);
  const auto tr = nlohmann::json::parse(slurp(out));
  EXPECT_DOUBLE_EQ(tr["statistic"].get<double>(), 0.0);
  EXPECT_DOUBLE_EQ(tr["p_value"].get<double>(), 1.0);

  const auto grid = scratch("grid.csv");
  ASSERT_EQ(run("region --file " + n1.string() + " --file2 " + n1.string() +
                    " --grid=-0.5:0.5:-0.5:0.5:2 --out " + grid.string(), out), 0);
  std::istringstream lines(slurp(grid));
  std::string line;
  std::vector<std::string> rows;
  while (std::getline(lines, line)) rows.push_back(line);
  ASSERT_EQ(rows.size(), 6u);  // header, 4 nodes, point estimate
  EXPECT_EQ(rows[0].rfind("delta1,delta2,member", 0), 0u);
  EXPECT_EQ(rows.back().substr(rows.back().size() - 4), ",1,1");
}

TEST(Cli, SimulateSmokeAndBadConfig) {
  const auto cfg = scratch("smoke.ini");
  write(cfg, "kind = coverage\nrho = 0.5\ns22 = 4\nn = 50\nmethods = jel\nlevels = 0.95\n"
             "replications = 1\nrepeats = 1\n");
  const auto out = scratch("sim.txt");
  const auto dir = scratch("simdir");
  ASSERT_EQ(run("simulate " + cfg.string() + " --out-dir " + dir.string(), out), 0);
  EXPECT_TRUE(fs::exists(dir / "report.json"));
  EXPECT_TRUE(fs::exists(dir / "report.txt"));
  const auto j = nlohmann::json::parse(slurp(dir / "report.json"));
  const double cov = j["cells"][0]["coverage_mean"].get<double>();
  EXPECT_TRUE(cov == 0.0 || cov == 1.0);

  const auto bad = scratch("bad.ini");
  write(bad, "levels = 1.5\n");
  EXPECT_EQ(run("simulate " + bad.string(), out), 2);
  EXPECT_NE(slurp(out).find("levels"), std::string::npos);
}
