#include "vht/csv.hpp"

#include <cstdio>

#include "vht/sim_time.hpp"

namespace vht {

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

CsvWriter::CsvWriter(std::initializer_list<std::string_view> header) : width_(header.size()) {
  for (auto h : header) cell(h);
  col_ = 0;
  out_ << '\n';
}

CsvWriter::CsvWriter(const std::vector<std::string>& header) : width_(header.size()) {
  for (const auto& h : header) cell(h);
  col_ = 0;
  out_ << '\n';
}

void CsvWriter::sep() {
  if (col_ > 0) out_ << ',';
  ++col_;
}

CsvWriter& CsvWriter::cell(std::string_view s) {
  sep();
  out_ << s;
  return *this;
}

CsvWriter& CsvWriter::cell(double x) { return cell(std::string_view(format_real(x))); }

CsvWriter& CsvWriter::cell(std::int64_t x) {
  sep();
  out_ << x;
  return *this;
}

CsvWriter& CsvWriter::cell(std::uint64_t x) {
  sep();
  out_ << x;
  return *this;
}

void CsvWriter::end_row() {
  if (col_ != width_) {
    throw ContractViolation("CSV row has " + std::to_string(col_) + " cells, header has " +
                            std::to_string(width_));
  }
  out_ << '\n';
  col_ = 0;
  ++rows_;
}

}  // namespace vht
