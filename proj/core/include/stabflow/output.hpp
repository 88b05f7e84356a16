// CSV and summary writers. Numbers are written with 17 significant digits.
#pragma once

#include <string>
#include <vector>

namespace stabflow {

struct RunConfig;
struct RunReport;

std::string format_number(double x);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  // Cells are strings so that labels and numbers can share a row.
  void add_row(std::vector<std::string> row);
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }
  const std::vector<std::string>& header() const { return header_; }

  void sort_rows();
  std::string str() const;
  void write(const std::string& path) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

void write_summary(const std::string& path, const RunConfig& cfg, const RunReport& rep);

}  // namespace stabflow
