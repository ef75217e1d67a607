// Command-line front end: estimate, ci, test, simulate, region.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "gini/distributions.hpp"
#include "gini/error.hpp"
#include "gini/inference.hpp"
#include "gini/io.hpp"
#include "gini/simstudy.hpp"
#include "gini/ustat.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumeric = 3;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DataOptions {
  std::string file;
  std::string file2;
  std::string cols = "0,1";
  std::string format = "auto";
  std::optional<int> cls;
};

void add_data_options(CLI::App* cmd, DataOptions& d, bool second_file) {
  cmd->add_option("--file", d.file, "CSV data file")->required();
  if (second_file) cmd->add_option("--file2", d.file2, "second CSV data file");
  cmd->add_option("--cols", d.cols, "column pair i,j (index or name: vw, sw, kw, ei)");
  cmd->add_option("--format", d.format, "auto | two_column | banknote")
      ->check(CLI::IsMember({"auto", "two_column", "banknote"}));
  cmd->add_option("--class", d.cls, "banknote class (0 genuine, 1 forged)")
      ->check(CLI::IsMember({0, 1}));
}

bool looks_like_banknote(const gini::Table& t) {
  if (t.columns.size() != 5 || !t.header.empty()) return false;
  for (double v : t.columns[4])
    if (v != 0.0 && v != 1.0) return false;
  return true;
}

std::pair<std::size_t, std::size_t> resolve_cols(const gini::Table& t, const std::string& cols) {
  const auto comma = cols.find(',');
  if (comma == std::string::npos) throw UsageError("--cols expects two columns, e.g. 0,1");
  return {gini::column_index(t, cols.substr(0, comma)), gini::column_index(t, cols.substr(comma + 1))};
}

struct Loaded {
  gini::Table table;
  std::optional<gini::BanknoteData> banknote;
};

Loaded load(const std::string& path, const std::string& format) {
  Loaded out{gini::read_csv(path), std::nullopt};
  const bool bank = format == "banknote" || (format == "auto" && looks_like_banknote(out.table));
  if (bank) {
    out.banknote = gini::split_banknote(out.table);
    for (const auto& w : out.banknote->warnings) std::cerr << "warning: " << w << '\n';
  }
  return out;
}

gini::BivariateSample pick(const Loaded& data, const std::string& cols, std::optional<int> cls) {
  if (data.banknote) {
    if (!cls) throw UsageError("banknote data: choose --class 0 (genuine) or 1 (forged)");
    const auto& t = *cls == 0 ? data.banknote->genuine : data.banknote->forged;
    const auto [x, y] = resolve_cols(t, cols);
    return gini::select_columns(t, x, y);
  }
  const auto [x, y] = resolve_cols(data.table, cols);
  return gini::select_columns(data.table, x, y);
}

gini::BivariateSample load_one(const DataOptions& d) { return pick(load(d.file, d.format), d.cols, d.cls); }

// Two samples: --file/--file2, or a single banknote file split by class.
std::pair<gini::BivariateSample, gini::BivariateSample> load_two(const DataOptions& d) {
  if (!d.file2.empty()) {
    const auto a = load(d.file, d.format);
    const auto b = load(d.file2, d.format);
    return {pick(a, d.cols, d.cls), pick(b, d.cols, d.cls)};
  }
  const auto a = load(d.file, d.format);
  if (!a.banknote) throw UsageError("two-sample commands need --file2 or a banknote file");
  return {pick(a, d.cols, 0), pick(a, d.cols, 1)};
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out);
  if (!f) throw gini::FileNotFound(out);
  f << text;
}

gini::GridSpec parse_grid(const std::string& text) {
  gini::GridSpec g;
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  if (parts.size() != 5) throw UsageError("--grid expects x0:x1:y0:y1:res");
  try {
    g.x0 = std::stod(parts[0]);
    g.x1 = std::stod(parts[1]);
    g.y0 = std::stod(parts[2]);
    g.y1 = std::stod(parts[3]);
    g.resolution = static_cast<std::size_t>(std::stoul(parts[4]));
  } catch (const std::exception&) {
    throw UsageError("--grid expects numbers, e.g. -0.5:0.5:-0.5:0.5:101");
  }
  try {
    g.validate();
  } catch (const gini::OutOfRange& e) {
    throw UsageError(e.what());
  }
  return g;
}

std::string fixed6(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(6) << (v == 0.0 ? 0.0 : v);
  return os.str();
}

// Asymptotic variance of a gamma target from a named family fitted to the sample.
double family_variance(const gini::BivariateSample& s, gini::Target target,
                       const std::string& family, double df, std::uint64_t seed) {
  const double rho = gini::pearson_r(s);
  const auto fam = gini::family_from_string(family);
  if (target == gini::Target::Delta)
    throw UsageError("asymptotic intervals for delta need --variance");
  if (fam == gini::Family::BivariateNormal) return gini::v_gamma_normal(rho);
  double mx = 0, my = 0;
  for (const auto& o : s) mx += o.x, my += o.y;
  mx /= static_cast<double>(s.size());
  my /= static_cast<double>(s.size());
  double sxx = 0, syy = 0, sxy = 0;
  for (const auto& o : s) {
    sxx += (o.x - mx) * (o.x - mx);
    syy += (o.y - my) * (o.y - my);
    sxy += (o.x - mx) * (o.y - my);
  }
  gini::DistributionSpec dist{fam, {sxx, sxy, syy}, df};
  if (fam == gini::Family::NormalLognormal) {
    double ml = 0, sll = 0, sxl = 0;
    for (const auto& o : s) {
      if (!(o.y > 0.0)) throw UsageError("normal_lognormal family needs positive y");
      ml += std::log(o.y);
    }
    ml /= static_cast<double>(s.size());
    for (const auto& o : s) {
      sll += (std::log(o.y) - ml) * (std::log(o.y) - ml);
      sxl += (o.x - mx) * (std::log(o.y) - ml);
    }
    dist.scatter = {sxx, sxl, sll};
  }
  const double nn = static_cast<double>(s.size());
  dist.scatter.s11 /= nn, dist.scatter.s12 /= nn, dist.scatter.s22 /= nn;
  const auto o = target == gini::Target::GammaYX ? gini::Orientation::YX : gini::Orientation::XY;
  return gini::v_gamma_monte_carlo(dist, o, 10000, 1000, seed);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gini correlation estimation, jackknife empirical likelihood intervals and tests"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string out;
  app.add_option("--out", out, "write output here instead of stdout");

  DataOptions d;

  auto* est = app.add_subcommand("estimate", "point estimates of gamma(X,Y), gamma(Y,X), delta, Pearson");
  add_data_options(est, d, false);

  std::string target = "gamma_xy", method = "jel", family;
  std::vector<double> levels;
  bool adjusted = false;
  std::optional<double> variance;
  double df = 5.0;
  std::uint64_t seed = 1;
  auto* ci = app.add_subcommand("ci", "confidence interval");
  add_data_options(ci, d, false);
  ci->add_option("--target", target, "gamma_xy | gamma_yx | delta | pearson");
  ci->add_option("--method", method, "jel | ajel | jackknife | asymptotic | pearson");
  ci->add_option("--level", levels, "confidence level (default 0.95)");
  ci->add_flag("--adjusted", adjusted, "adjusted empirical likelihood (same as --method ajel)");
  ci->add_option("--variance", variance, "asymptotic variance for --method asymptotic / pearson");
  ci->add_option("--family", family, "normal | t | normal_lognormal, for model-based variances");
  ci->add_option("--df", df, "degrees of freedom for --family t");
  ci->add_option("--seed", seed, "seed for Monte Carlo variances");

  std::string mode = "equality";
  auto* test = app.add_subcommand("test", "equality test (one sample) or two-sample joint test");
  add_data_options(test, d, true);
  test->add_option("--mode", mode, "equality | two_sample")
      ->check(CLI::IsMember({"equality", "two_sample"}));
  test->add_option("--level", levels, "levels for the decisions (default 0.90 0.95)");
  test->add_flag("--adjusted", adjusted, "adjusted empirical likelihood");

  std::string config, out_dir = ".";
  std::optional<std::uint64_t> sim_seed;
  std::optional<std::size_t> reps, repeats, threads;
  auto* sim = app.add_subcommand("simulate", "Monte Carlo study from a key = value config");
  sim->add_option("config", config, "study configuration file")->required();
  sim->add_option("--out-dir", out_dir, "directory for report.json and report.txt");
  sim->add_option("--seed", sim_seed, "override the config seed");
  sim->add_option("--reps", reps, "override replications");
  sim->add_option("--repeats", repeats, "override outer repeats");
  sim->add_option("--threads", threads, "worker threads (0 = all cores)");

  std::string grid_text = "-1:1:-1:1:101";
  double region_level = 0.90;
  auto* region = app.add_subcommand("region", "joint confidence region of two Gini differences on a grid");
  add_data_options(region, d, true);
  region->add_option("--level", region_level, "confidence level");
  region->add_option("--grid", grid_text, "x0:x1:y0:y1:res");
  region->add_flag("--adjusted", adjusted, "adjusted empirical likelihood");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (est->parsed()) {
      const auto s = load_one(d);
      const double g1 = gini::gini_gamma(s, gini::Orientation::XY);
      const double g2 = gini::gini_gamma(s, gini::Orientation::YX);
      nlohmann::json j = {{"gamma_xy", gini::json_number(g1)},
                          {"gamma_yx", gini::json_number(g2)},
                          {"delta", gini::json_number(g1 - g2)},
                          {"pearson", gini::json_number(gini::pearson_r(s))},
                          {"n", s.size()}};
      emit(j.dump(2) + "\n", out);
    } else if (ci->parsed()) {
      const auto s = load_one(d);
      gini::Target t;
      gini::Method m;
      try {
        t = gini::target_from_string(target);
        m = gini::method_from_string(method);
      } catch (const gini::ConfigInvalid& e) {
        throw UsageError(e.what());
      }
      if (adjusted && m == gini::Method::JEL) m = gini::Method::AJEL;
      if (m == gini::Method::Pearson) t = gini::Target::Pearson;
      if (t == gini::Target::Pearson && m != gini::Method::Pearson && m != gini::Method::JackknifeNormal)
        throw UsageError("target pearson supports --method pearson or jackknife");
      const double level = levels.empty() ? 0.95 : levels.front();
      gini::IntervalEstimate r;
      switch (m) {
        case gini::Method::JEL:
        case gini::Method::AJEL: r = gini::ci_jel(s, t, level, m == gini::Method::AJEL); break;
        case gini::Method::JackknifeNormal: r = gini::ci_normal_jackknife(s, t, level); break;
        case gini::Method::AsymptoticNormal: {
          double v = 0.0;
          if (variance)
            v = *variance;
          else if (!family.empty())
            v = family_variance(s, t, family, df, seed);
          else
            throw UsageError("--method asymptotic needs --variance or --family");
          r = gini::ci_normal_asymptotic(s, t, level, v);
          break;
        }
        case gini::Method::Pearson: {
          if (variance)
            r = gini::ci_pearson(s, level, gini::PearsonVariance::Supplied, *variance);
          else if (family == "normal")
            r = gini::ci_pearson(s, level, gini::PearsonVariance::ClosedFormNormal);
          else
            r = gini::ci_pearson(s, level, gini::PearsonVariance::Moments);
          break;
        }
      }
      emit(gini::to_json(r).dump(2) + "\n", out);
    } else if (test->parsed()) {
      if (levels.empty()) levels = {0.90, 0.95};
      gini::TestResult r;
      if (mode == "equality") {
        r = gini::test_equality(load_one(d), adjusted, levels);
      } else {
        const auto [a, b] = load_two(d);
        r = gini::test_two_sample(a, b, adjusted, levels);
      }
      for (const auto& w : r.warnings) std::cerr << "warning: " << w << '\n';
      emit(gini::to_json(r).dump(2) + "\n", out);
    } else if (sim->parsed()) {
      gini::StudyConfig cfg;
      try {
        cfg = gini::read_study_config(config);
        if (sim_seed) cfg.seed = *sim_seed;
        if (reps) cfg.replications = *reps;
        if (repeats) cfg.outer_repeats = *repeats;
        if (threads) cfg.threads = *threads;
        cfg.validate();
      } catch (const gini::ConfigInvalid& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
      }
      const auto report = gini::run_study(cfg);
      std::filesystem::create_directories(out_dir);
      const auto dir = std::filesystem::path(out_dir);
      emit(gini::to_json(report).dump(2) + "\n", (dir / "report.json").string());
      emit(gini::format_report_text(report, false), (dir / "report.txt").string());
      std::cout << gini::format_report_text(report, gini::color_enabled());
      if (report.guard_tripped) return kExitNumeric;
    } else if (region->parsed()) {
      const auto grid = parse_grid(grid_text);
      const auto [a, b] = load_two(d);
      const auto g = gini::joint_region_grid(a, b, region_level, grid, adjusted);
      std::ostringstream os;
      os << "delta1,delta2,member,point_estimate\n";
      for (const auto& node : g.nodes)
        os << fixed6(node.delta1) << ',' << fixed6(node.delta2) << ',' << (node.member ? 1 : 0)
           << ",0\n";
      os << fixed6(g.estimate[0]) << ',' << fixed6(g.estimate[1]) << ",1,1\n";
      emit(os.str(), out);
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const gini::ConfigInvalid& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const gini::SingularCovariance& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const gini::HullViolation& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const gini::Error& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitOk;
}
