#include "dpcjam/cli/config.hpp"

#include "dpcjam/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace dpcjam::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v)) {
    throw ConfigError(what + ": not a number: '" + text + "'");
  }
  return v;
}

template <typename Int>
Int parse_int(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  Int v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw ConfigError(what + ": not an integer: '" + text + "'");
  }
  return v;
}

bool parse_bool(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  if (t == "1" || t == "true" || t == "yes") return true;
  if (t == "0" || t == "false" || t == "no") return false;
  throw ConfigError(what + ": not a boolean: '" + text + "'");
}

}  // namespace

Grid Grid::parse(const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) throw ConfigError("empty grid");
  Grid g;
  g.values.clear();
  if (t.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(t);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw ConfigError("range grid needs start:stop:step: '" + t + "'");
    const double start = parse_double(parts[0], "grid start");
    const double stop = parse_double(parts[1], "grid stop");
    const double step = parse_double(parts[2], "grid step");
    if (!(step > 0.0)) throw ConfigError("grid step must be > 0: '" + t + "'");
    if (stop < start) throw ConfigError("grid stop below start: '" + t + "'");
    const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
    if (count > 1000000) throw ConfigError("grid too large: '" + t + "'");
    for (long k = 0; k < count; ++k) g.values.push_back(start + static_cast<double>(k) * step);
  } else {
    std::stringstream ss(t);
    for (std::string p; std::getline(ss, p, ',');) g.values.push_back(parse_double(p, "grid value"));
  }
  if (g.values.empty()) throw ConfigError("empty grid");
  return g;
}

std::string Grid::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ',';
    out += format_number(values[i]);
  }
  return out;
}

std::vector<GameKind> games(GameSelection selection) {
  switch (selection) {
    case GameSelection::Costa: return {GameKind::Costa};
    case GameSelection::SideInformation: return {GameKind::SideInformation};
    case GameSelection::Both: return {GameKind::Costa, GameKind::SideInformation};
  }
  return {};
}

void SweepSpec::validate() const {
  for (const Grid* g : {&P_U, &P_J, &sigma2, &sigmaS2}) {
    if (g->values.empty()) throw ConfigError("empty grid");
  }
  if (n < 1) throw ConfigError("n must be >= 1");
  if (!(tol > 0.0)) throw ConfigError("tol must be > 0");
  if (max_rounds < 1) throw ConfigError("max_rounds must be >= 1");
  if (random_starts < 0) throw ConfigError("random_starts must be >= 0");
  if (!(trial_scale > 0.0)) throw ConfigError("trial_scale must be > 0");
  if (N < 2) throw ConfigError("N must be >= 2");
  for (const auto& ch : points()) {
    try {
      ch.validate();
    } catch (const Error& e) {
      throw ConfigError(e.what());
    }
  }
}

std::vector<ChannelParams> SweepSpec::points() const {
  std::vector<ChannelParams> out;
  for (double pu : P_U.values)
    for (double pj : P_J.values)
      for (double s2 : sigma2.values)
        for (double ss2 : sigmaS2.values) {
          ChannelParams ch;
          ch.n = n;
          ch.P_U = pu;
          ch.P_J = pj;
          ch.sigma2 = s2;
          ch.sigmaS2 = ss2;
          ch.base = base;
          out.push_back(ch);
        }
  return out;
}

KeyValues read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read config file: " + path);
  KeyValues out;
  int line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + ":" + std::to_string(line_no) + ": expected key=value");
    }
    out.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return out;
}

void apply_config(SweepSpec& spec, const KeyValues& values) {
  for (const auto& [key, value] : values) {
    if (key == "P_U") spec.P_U = Grid::parse(value);
    else if (key == "P_J") spec.P_J = Grid::parse(value);
    else if (key == "sigma2") spec.sigma2 = Grid::parse(value);
    else if (key == "sigmaS2") spec.sigmaS2 = Grid::parse(value);
    else if (key == "game") {
      if (value == "costa") spec.game = GameSelection::Costa;
      else if (value == "si") spec.game = GameSelection::SideInformation;
      else if (value == "both") spec.game = GameSelection::Both;
      else throw ConfigError("game must be costa, si or both: '" + value + "'");
    } else if (key == "n") spec.n = parse_int<int>(value, key);
    else if (key == "base") {
      const auto base = parse_log_base(value);
      if (!base) throw ConfigError("base must be bits or nats: '" + value + "'");
      spec.base = *base;
    } else if (key == "seed") spec.seed = parse_int<std::uint64_t>(value, key);
    else if (key == "output") spec.output = value;
    else if (key == "tol") spec.tol = parse_double(value, key);
    else if (key == "max_rounds") spec.max_rounds = parse_int<int>(value, key);
    else if (key == "random_starts") spec.random_starts = parse_int<int>(value, key);
    else if (key == "report") spec.report = value;
    else if (key == "trial_scale") spec.trial_scale = parse_double(value, key);
    else if (key == "inject_fault") spec.inject_fault = parse_bool(value, key);
    else if (key == "N") spec.N = parse_int<int>(value, key);
    else if (key == "shape") spec.shape = value;
    else throw ConfigError("unknown config key: '" + key + "'");
  }
}

}  // namespace dpcjam::cli
