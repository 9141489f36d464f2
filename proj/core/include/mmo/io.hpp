#pragma once

#include <fstream>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mmo::io {

/// Shortest round-trip is not wanted here: every double is written with 17
/// significant digits, independent of the global locale.
std::string format_double(double v);

/// Minimal CSV writer. Values are written with format_double; strings verbatim.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, std::initializer_list<std::string_view> header);

  CsvWriter& cell(double v);
  CsvWriter& cell(long long v);
  CsvWriter& cell(std::string_view v);
  void end_row();

  void row(std::span<const double> values);

  void close();

 private:
  void separator();

  std::ofstream out_;
  std::string path_;
  std::size_t columns_;
  std::size_t filled_ = 0;
};

/// Parse a comma separated list of doubles ("1e-6,3e-3,3e-3").
std::vector<double> parse_double_list(std::string_view text);

/// Parse one double; locale independent, rejects trailing garbage.
double parse_double(std::string_view text);

}  // namespace mmo::io
