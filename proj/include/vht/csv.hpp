#pragma once

#include <cstdint>
#include <initializer_list>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace vht {

/// 17 significant digits, enough to round-trip any double.
std::string format_real(double x);

/// Comma-separated rows with a header and '\n' line ends.
class CsvWriter {
 public:
  explicit CsvWriter(std::initializer_list<std::string_view> header);
  explicit CsvWriter(const std::vector<std::string>& header);

  CsvWriter& cell(std::string_view s);
  CsvWriter& cell(double x);
  CsvWriter& cell(std::int64_t x);
  CsvWriter& cell(std::uint64_t x);
  CsvWriter& cell(int x) { return cell(static_cast<std::int64_t>(x)); }
  /// Ends the current row; throws if its width differs from the header.
  void end_row();

  std::size_t rows() const { return rows_; }
  std::string str() const { return out_.str(); }

 private:
  void sep();

  std::ostringstream out_;
  std::size_t width_;
  std::size_t col_ = 0;
  std::size_t rows_ = 0;
};

}  // namespace vht
