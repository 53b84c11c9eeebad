#include "dpcjam/report.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <locale>
#include <ostream>
#include <sstream>

namespace dpcjam {

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::setprecision(12) << value;
  return os.str();
}

ReportBlock& ReportBlock::add(std::string key, std::string value) {
  // Values are single-line by construction of the format.
  for (char& ch : value) {
    if (ch == '\n' || ch == '\r') ch = ' ';
  }
  entries_.emplace_back(std::move(key), std::move(value));
  return *this;
}

ReportBlock& ReportBlock::add(std::string key, const char* value) {
  return add(std::move(key), std::string(value));
}

ReportBlock& ReportBlock::add(std::string key, double value) {
  return add(std::move(key), format_number(value));
}

ReportBlock& ReportBlock::add(std::string key, int value) {
  return add(std::move(key), std::to_string(value));
}

ReportBlock& ReportBlock::add(std::string key, long long value) {
  return add(std::move(key), std::to_string(value));
}

ReportBlock& ReportBlock::add(std::string key, unsigned long long value) {
  return add(std::move(key), std::to_string(value));
}

ReportBlock& ReportBlock::add(std::string key, bool value) {
  return add(std::move(key), std::string(value ? "true" : "false"));
}

std::string ReportBlock::get(const std::string& key) const {
  for (const auto& [k, v] : entries_) {
    if (k == key) return v;
  }
  return {};
}

void write_report(std::ostream& out, const std::vector<ReportBlock>& blocks) {
  bool first = true;
  for (const auto& block : blocks) {
    if (!first) out << '\n';
    first = false;
    for (const auto& [k, v] : block.entries()) out << k << '=' << v << '\n';
  }
}

std::vector<ReportBlock> parse_report(std::istream& in) {
  std::vector<ReportBlock> blocks;
  ReportBlock current;
  bool open = false;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) {
      if (open) blocks.push_back(std::move(current));
      current = ReportBlock{};
      open = false;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    current.add(line.substr(0, eq), line.substr(eq + 1));
    open = true;
  }
  if (open) blocks.push_back(std::move(current));
  return blocks;
}

}  // namespace dpcjam
