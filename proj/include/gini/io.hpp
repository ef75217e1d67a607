#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "gini/inference.hpp"
#include "gini/kernels.hpp"
#include "gini/simstudy.hpp"

namespace gini {

/// Numeric CSV contents, column-major.
struct Table {
  std::vector<std::string> header;  // empty when the file has no header line
  std::vector<std::vector<double>> columns;
  std::size_t rows() const noexcept { return columns.empty() ? 0 : columns.front().size(); }
};

/// Comma-separated numeric table. A non-numeric first row is taken as a header.
/// Throws FileNotFound or ParseError(line, column).
Table read_csv(const std::string& path);
Table parse_csv(std::istream& in);

/// Resolves a column given by 0-based index, header name, or banknote name
/// (vw, sw, kw, ei). Throws ConfigInvalid("cols") when absent.
std::size_t column_index(const Table& table, const std::string& name);

/// Pair of columns as a bivariate sample.
BivariateSample select_columns(const Table& table, std::size_t x, std::size_t y);

struct BanknoteData {
  Table genuine;  // class 0
  Table forged;   // class 1
  std::vector<std::string> warnings;
};

inline constexpr std::size_t kBanknoteGenuine = 762;
inline constexpr std::size_t kBanknoteForged = 610;

/// Five columns (vw, sw, kw, ei, class) with class in {0, 1}. A row-count mismatch
/// with 762 / 610 is a warning only.
BanknoteData load_banknote(const std::string& path);
BanknoteData split_banknote(const Table& table);

/// Writes x,y rows with round-trip precision.
void write_two_column(const std::string& path, const BivariateSample& sample);

/// Declarative key = value study configuration (INI syntax, optional [section] ignored).
/// Unknown keys and bad values throw ConfigInvalid naming the key.
StudyConfig parse_study_config(std::istream& in);
StudyConfig read_study_config(const std::string& path);

/// Floats rounded to 6 decimals; non-finite values become null.
nlohmann::json json_number(double value);
nlohmann::json to_json(const IntervalEstimate& ci);
nlohmann::json to_json(const TestResult& test);
nlohmann::json to_json(const StudyReport& report);

/// Method rows by level columns, "CovProb Length" style cells with sds in parentheses.
std::string format_report_text(const StudyReport& report, bool color);

/// Whether the environment permits ANSI colour (NO_COLOR unset and stdout a terminal).
bool color_enabled();

}  // namespace gini
