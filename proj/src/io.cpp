#include "gini/io.hpp"

#include <unistd.h>

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "gini/error.hpp"

namespace gini {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(line);
  while (std::getline(is, cur, ',')) out.push_back(trim(cur));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* b = s.data();
  const char* e = b + s.size();
  if (*b == '+') ++b;
  const auto res = std::from_chars(b, e, out);
  return res.ec == std::errc() && res.ptr == e;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

}  // namespace

Table parse_csv(std::istream& in) {
  Table t;
  std::string line;
  std::size_t lineno = 0;
  std::size_t width = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    std::vector<double> row(fields.size());
    bool numeric = true;
    std::size_t bad = 0;
    for (std::size_t c = 0; c < fields.size(); ++c) {
      if (!parse_double(fields[c], row[c]) || !std::isfinite(row[c])) {
        numeric = false;
        bad = c;
        break;
      }
    }
    if (first) {
      first = false;
      width = fields.size();
      t.columns.assign(width, {});
      if (!numeric) {
        t.header = fields;
        continue;
      }
    }
    if (fields.size() != width)
      throw ParseError(lineno, std::min(fields.size(), width) + 1,
                       "expected " + std::to_string(width) + " fields, found " +
                           std::to_string(fields.size()));
    if (!numeric)
      throw ParseError(lineno, bad + 1, "not a finite number: '" + fields[bad] + "'");
    for (std::size_t c = 0; c < width; ++c) t.columns[c].push_back(row[c]);
  }
  if (t.rows() == 0) throw ParseError(lineno + 1, 1, "no data rows");
  return t;
}

Table read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileNotFound(path);
  return parse_csv(in);
}

std::size_t column_index(const Table& table, const std::string& name) {
  const std::string key = trim(name);
  for (std::size_t c = 0; c < table.header.size(); ++c)
    if (lower(table.header[c]) == lower(key)) return c;
  static const std::map<std::string, std::size_t> banknote{
      {"vw", 0}, {"sw", 1}, {"kw", 2}, {"ei", 3}};
  if (auto it = banknote.find(lower(key)); it != banknote.end() && it->second < table.columns.size())
    return it->second;
  std::size_t idx = 0;
  const auto res = std::from_chars(key.data(), key.data() + key.size(), idx);
  if (res.ec == std::errc() && res.ptr == key.data() + key.size() && idx < table.columns.size())
    return idx;
  throw ConfigInvalid("cols", "no column '" + key + "'");
}

BivariateSample select_columns(const Table& table, std::size_t x, std::size_t y) {
  if (x >= table.columns.size() || y >= table.columns.size())
    throw ConfigInvalid("cols", "column index out of range");
  return BivariateSample(std::span<const double>(table.columns[x]),
                         std::span<const double>(table.columns[y]));
}

BanknoteData split_banknote(const Table& table) {
  if (table.columns.size() != 5)
    throw ParseError(1, 1, "banknote data needs 5 columns, found " +
                               std::to_string(table.columns.size()));
  BanknoteData out;
  out.genuine.columns.assign(4, {});
  out.forged.columns.assign(4, {});
  out.genuine.header = out.forged.header = {"vw", "sw", "kw", "ei"};
  const std::size_t offset = table.header.empty() ? 1 : 2;
  for (std::size_t r = 0; r < table.rows(); ++r) {
    const double cls = table.columns[4][r];
    Table* dst = nullptr;
    if (cls == 0.0)
      dst = &out.genuine;
    else if (cls == 1.0)
      dst = &out.forged;
    else
      throw ParseError(r + offset, 5, "class must be 0 or 1");
    for (std::size_t c = 0; c < 4; ++c) dst->columns[c].push_back(table.columns[c][r]);
  }
  auto check = [&](const Table& t, std::size_t expected, const char* label) {
    if (t.rows() != expected)
      out.warnings.push_back(std::string(label) + " class has " + std::to_string(t.rows()) +
                             " rows, expected " + std::to_string(expected));
  };
  check(out.genuine, kBanknoteGenuine, "genuine (0)");
  check(out.forged, kBanknoteForged, "forged (1)");
  return out;
}

BanknoteData load_banknote(const std::string& path) { return split_banknote(read_csv(path)); }

void write_two_column(const std::string& path, const BivariateSample& sample) {
  std::ofstream out(path);
  if (!out) throw FileNotFound(path);
  out << std::setprecision(17);
  out << "x,y\n";
  for (const auto& o : sample) out << o.x << ',' << o.y << '\n';
}

namespace {

double to_real(const std::string& key, const std::string& v) {
  double d = 0.0;
  if (!parse_double(trim(v), d) || !std::isfinite(d))
    throw ConfigInvalid(key, "expected a number, got '" + v + "'");
  return d;
}

std::size_t to_count(const std::string& key, const std::string& v) {
  const std::string s = trim(v);
  std::size_t out = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw ConfigInvalid(key, "expected a non-negative integer, got '" + v + "'");
  return out;
}

}  // namespace

StudyConfig parse_study_config(std::istream& in) {
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigINI().from_config(in);
  } catch (const CLI::Error& e) {
    throw ConfigInvalid("<file>", e.what());
  }
  StudyConfig cfg;
  double rho = 0.0, rho2 = 0.0;
  double s11 = 1.0, s22 = 1.0, s11b = 1.0, s22b = 1.0;
  bool have_rho2 = false, have_s11b = false, have_s22b = false, have_family2 = false;
  std::optional<double> df2;
  for (const auto& item : items) {
    const std::string& key = item.name;
    if (key == "++" || key == "--") continue;
    if (item.inputs.empty()) throw ConfigInvalid(key, "missing value");
    const std::string& v = item.inputs.front();
    auto one = [&] {
      if (item.inputs.size() != 1) throw ConfigInvalid(key, "expected a single value");
      return v;
    };
    if (key == "kind") {
      cfg.kind = study_kind_from_string(one());
    } else if (key == "family") {
      try {
        cfg.dist.family = family_from_string(one());
      } catch (const ConfigInvalid& e) {
        throw ConfigInvalid("family", e.what());
      }
    } else if (key == "family2") {
      try {
        cfg.dist2.family = family_from_string(one());
      } catch (const ConfigInvalid& e) {
        throw ConfigInvalid("family2", e.what());
      }
      have_family2 = true;
    } else if (key == "rho") {
      rho = to_real(key, one());
    } else if (key == "rho2") {
      rho2 = to_real(key, one());
      have_rho2 = true;
    } else if (key == "s11") {
      s11 = to_real(key, one());
    } else if (key == "s22") {
      s22 = to_real(key, one());
    } else if (key == "s11_2") {
      s11b = to_real(key, one());
      have_s11b = true;
    } else if (key == "s22_2") {
      s22b = to_real(key, one());
      have_s22b = true;
    } else if (key == "df") {
      cfg.dist.df = to_real(key, one());
    } else if (key == "df2") {
      df2 = to_real(key, one());
    } else if (key == "n") {
      cfg.n = to_count(key, one());
    } else if (key == "n1") {
      cfg.n1 = to_count(key, one());
    } else if (key == "n2") {
      cfg.n2 = to_count(key, one());
    } else if (key == "target") {
      try {
        cfg.target = target_from_string(one());
      } catch (const ConfigInvalid& e) {
        throw ConfigInvalid("target", e.what());
      }
    } else if (key == "methods") {
      cfg.methods.clear();
      for (const auto& m : item.inputs) {
        try {
          cfg.methods.push_back(method_from_string(trim(m)));
        } catch (const ConfigInvalid& e) {
          throw ConfigInvalid("methods", e.what());
        }
      }
    } else if (key == "levels") {
      cfg.levels.clear();
      for (const auto& l : item.inputs) cfg.levels.push_back(to_real(key, l));
    } else if (key == "replications" || key == "reps") {
      cfg.replications = to_count("replications", one());
    } else if (key == "repeats" || key == "outer_repeats") {
      cfg.outer_repeats = to_count("repeats", one());
    } else if (key == "seed") {
      cfg.seed = to_count(key, one());
    } else if (key == "threads") {
      cfg.threads = to_count(key, one());
    } else if (key == "true_value" || key == "delta0") {
      cfg.true_value = to_real(key, one());
    } else if (key == "variance") {
      cfg.variance = to_real(key, one());
    } else if (key == "max_failure_rate") {
      cfg.max_failure_rate = to_real(key, one());
    } else {
      throw ConfigInvalid(key, "unknown key");
    }
  }
  if (!(s11 > 0.0)) throw ConfigInvalid("s11", "must be positive");
  if (!(s22 > 0.0)) throw ConfigInvalid("s22", "must be positive");
  if (!(rho > -1.0 && rho < 1.0)) throw ConfigInvalid("rho", "must lie in (-1, 1)");
  cfg.dist.scatter = {s11, rho * std::sqrt(s11 * s22), s22};
  // The second population defaults to the first with its own family.
  if (!have_family2) cfg.dist2.family = cfg.dist.family;
  if (!have_rho2) rho2 = rho;
  if (!have_s11b) s11b = s11;
  if (!have_s22b) s22b = s22;
  if (!(rho2 > -1.0 && rho2 < 1.0)) throw ConfigInvalid("rho2", "must lie in (-1, 1)");
  if (!(s11b > 0.0)) throw ConfigInvalid("s11_2", "must be positive");
  if (!(s22b > 0.0)) throw ConfigInvalid("s22_2", "must be positive");
  cfg.dist2.scatter = {s11b, rho2 * std::sqrt(s11b * s22b), s22b};
  cfg.dist2.df = df2.value_or(cfg.dist.df);
  cfg.validate();
  return cfg;
}

StudyConfig read_study_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileNotFound(path);
  return parse_study_config(in);
}

nlohmann::json json_number(double value) {
  if (!std::isfinite(value)) return nullptr;
  const double r = std::round(value * 1e6) / 1e6;
  return r == 0.0 ? 0.0 : r;  // no negative zero
}

nlohmann::json to_json(const IntervalEstimate& ci) {
  return {{"point", json_number(ci.point)},
          {"lower", json_number(ci.lower)},
          {"upper", json_number(ci.upper)},
          {"level", json_number(ci.level)},
          {"method", to_string(ci.method)},
          {"target", to_string(ci.target)},
          {"lower_clipped", ci.lower_clipped},
          {"upper_clipped", ci.upper_clipped},
          {"nonmonotone", ci.nonmonotone}};
}

nlohmann::json to_json(const TestResult& test) {
  nlohmann::json reject = nlohmann::json::object();
  for (const auto& [level, r] : test.reject_at) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(2) << level;
    reject[os.str()] = r;
  }
  return {{"statistic", json_number(test.statistic)},
          {"df", test.df},
          {"p_value", json_number(test.p_value)},
          {"reject_at", reject},
          {"status", to_string(test.status)},
          {"warnings", test.warnings}};
}

nlohmann::json to_json(const StudyReport& report) {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : report.cells) {
    cells.push_back({{"method", to_string(c.method)},
                     {"level", json_number(c.level)},
                     {"coverage_mean", json_number(c.coverage_mean)},
                     {"coverage_sd", json_number(c.coverage_sd)},
                     {"length_mean", json_number(c.length_mean)},
                     {"length_sd", json_number(c.length_sd)},
                     {"pvalue_mean", json_number(c.pvalue_mean)},
                     {"pvalue_sd", json_number(c.pvalue_sd)},
                     {"power_mean", json_number(c.power_mean)},
                     {"power_sd", json_number(c.power_sd)},
                     {"failures", c.failures},
                     {"hull_violations", c.hull_violations},
                     {"nonmonotone", c.nonmonotone},
                     {"clipped", c.clipped}});
  }
  nlohmann::json out = {{"kind", to_string(report.kind)},
                        {"target", to_string(report.target)},
                        {"replications", report.replications},
                        {"outer_repeats", report.outer_repeats},
                        {"guard_tripped", report.guard_tripped},
                        {"cells", cells}};
  if (report.kind == StudyKind::TwoSample)
    out["true_value"] = {json_number(report.true_pair[0]), json_number(report.true_pair[1])};
  else
    out["true_value"] = json_number(report.true_value);
  return out;
}

namespace {

// ".950(.003)" in the style of printed tables; values >= 1 keep their leading digit.
std::string cell_text(double mean, double sd, int digits) {
  if (!std::isfinite(mean)) return "NA";
  auto fmt = [digits](double v) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(digits) << v;
    std::string s = os.str();
    if (s.rfind("0.", 0) == 0) s.erase(0, 1);
    if (s.rfind("-0.", 0) == 0) s.erase(1, 1);
    return s;
  };
  return fmt(mean) + "(" + fmt(std::isfinite(sd) ? sd : 0.0) + ")";
}

}  // namespace

std::string format_report_text(const StudyReport& report, bool color) {
  std::vector<double> levels;
  std::vector<Method> methods;
  for (const auto& c : report.cells) {
    if (std::find(levels.begin(), levels.end(), c.level) == levels.end()) levels.push_back(c.level);
    if (std::find(methods.begin(), methods.end(), c.method) == methods.end())
      methods.push_back(c.method);
  }
  const bool coverage = report.kind == StudyKind::Coverage;
  const bool two = report.kind == StudyKind::TwoSample;
  const std::string bold = color ? "\033[1m" : "";
  const std::string reset = color ? "\033[0m" : "";

  std::ostringstream os;
  os << bold << to_string(report.kind) << " study, target " << to_string(report.target)
     << ", R=" << report.replications << ", K=" << report.outer_repeats << reset << '\n';
  const int width = coverage ? 26 : 44;
  os << std::left << std::setw(18) << "Method";
  for (double l : levels) {
    std::ostringstream h;
    h << std::fixed << std::setprecision(2) << l;
    const std::string cols = coverage ? "  CovProb Length" : two ? "  PValue Power CovProb" : "  CovProb Length PValue Power";
    os << std::setw(width) << (h.str() + cols) << ' ';
  }
  os << '\n';
  for (Method m : methods) {
    os << std::setw(18) << to_string(m);
    for (double l : levels) {
      const auto& c = report.cell(m, l);
      std::string text;
      if (coverage)
        text = cell_text(c.coverage_mean, c.coverage_sd, 3) + " " +
               cell_text(c.length_mean, c.length_sd, 3);
      else if (two)
        text = cell_text(c.pvalue_mean, c.pvalue_sd, 4) + " " +
               cell_text(c.power_mean, c.power_sd, 3) + " " +
               cell_text(c.coverage_mean, c.coverage_sd, 3);
      else
        text = cell_text(c.coverage_mean, c.coverage_sd, 3) + " " +
               cell_text(c.length_mean, c.length_sd, 3) + " " +
               cell_text(c.pvalue_mean, c.pvalue_sd, 3) + " " +
               cell_text(c.power_mean, c.power_sd, 3);
      os << std::setw(width) << text << ' ';
    }
    os << '\n';
  }
  std::size_t failures = 0;
  for (const auto& c : report.cells) failures += c.failures;
  if (failures > 0) os << "failed replications (all cells): " << failures << '\n';
  if (report.guard_tripped) os << "failure-rate guard tripped; aggregates withheld\n";
  return os.str();
}

bool color_enabled() {
  const char* nc = std::getenv("NO_COLOR");
  if (nc != nullptr && nc[0] != '\0') return false;
  return isatty(STDOUT_FILENO) != 0;
}

}  // namespace gini
