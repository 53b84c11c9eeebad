#pragma once

// Line-oriented key=value report blocks separated by blank lines, plus the
// shared numeric formatting (12 significant digits, '.' decimal separator).

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace dpcjam {

std::string format_number(double value);

class ReportBlock {
 public:
  ReportBlock& add(std::string key, std::string value);
  ReportBlock& add(std::string key, const char* value);
  ReportBlock& add(std::string key, double value);
  ReportBlock& add(std::string key, int value);
  ReportBlock& add(std::string key, long long value);
  ReportBlock& add(std::string key, unsigned long long value);
  ReportBlock& add(std::string key, bool value);

  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }
  /// First value stored under key, or empty string.
  std::string get(const std::string& key) const;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

void write_report(std::ostream& out, const std::vector<ReportBlock>& blocks);
std::vector<ReportBlock> parse_report(std::istream& in);

}  // namespace dpcjam
