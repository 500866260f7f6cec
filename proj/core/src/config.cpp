#include "tpcc/config.hpp"

#include <fstream>
#include <sstream>

namespace tpcc {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value,
                            const std::string& expected) {
  throw ConfigError("config key '" + key + "': bad value '" + value +
                    "' (expected " + expected + ")");
}

std::int64_t parse_int(const std::string& key, const std::string& value,
                       std::int64_t min) {
  std::int64_t v = 0;
  try {
    std::size_t used = 0;
    v = std::stoll(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
  } catch (const std::exception&) {
    bad_value(key, value, "an integer");
  }
  if (v < min)
    bad_value(key, value, "an integer >= " + std::to_string(min));
  return v;
}

double parse_positive_double(const std::string& key,
                             const std::string& value) {
  double v = 0;
  try {
    std::size_t used = 0;
    v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
  } catch (const std::exception&) {
    bad_value(key, value, "a number");
  }
  if (v <= 0) bad_value(key, value, "a number > 0");
  return v;
}

}  // namespace

void apply_config_entry(BenchConfig& c, const std::string& key,
                        const std::string& value) {
  if (key == "warehouses") {
    c.warehouses = static_cast<int>(parse_int(key, value, 1));
  } else if (key == "terminals-per-warehouse") {
    c.terminals_per_warehouse = static_cast<int>(parse_int(key, value, 1));
  } else if (key == "workers") {
    c.workers = static_cast<int>(parse_int(key, value, 1));
  } else if (key == "seed") {
    try {
      std::size_t used = 0;
      c.seed = std::stoull(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
    } catch (const std::exception&) {
      bad_value(key, value, "an unsigned integer");
    }
  } else if (key == "clock") {
    if (value == "virtual")
      c.clock_mode = ClockMode::Virtual;
    else if (value == "wall")
      c.clock_mode = ClockMode::Wall;
    else
      bad_value(key, value, "'virtual' or 'wall'");
  } else if (key == "duration-s") {
    c.duration_s = parse_positive_double(key, value);
  } else if (key == "block-time-ms") {
    c.ledger.block.block_time = millis_to_time(parse_int(key, value, 1));
  } else if (key == "block-max-tx") {
    c.ledger.block.max_tx =
        static_cast<std::size_t>(parse_int(key, value, 1));
  } else if (key == "block-max-bytes") {
    c.ledger.block.max_bytes =
        static_cast<std::size_t>(parse_int(key, value, 1));
  } else if (key == "endorse-base-ms") {
    c.ledger.latency.endorse_base = millis_to_time(parse_int(key, value, 1));
  } else if (key == "commit-base-ms") {
    c.ledger.latency.commit_base = millis_to_time(parse_int(key, value, 1));
  } else if (key == "endorse-timeout-ms") {
    c.ledger.latency.endorse_timeout =
        millis_to_time(parse_int(key, value, 1));
  } else if (key == "commit-timeout-ms") {
    c.ledger.latency.commit_timeout =
        millis_to_time(parse_int(key, value, 1));
  } else if (key == "latency-load-factor") {
    c.ledger.latency.load_factor = parse_positive_double(key, value);
  } else if (key == "latency-model") {
    if (value == "constant")
      c.ledger.latency.kind = LatencyConfig::Kind::Constant;
    else if (value == "load-exponential")
      c.ledger.latency.kind = LatencyConfig::Kind::LoadExponential;
    else
      bad_value(key, value, "'constant' or 'load-exponential'");
  } else if (key == "timing-preset") {
    if (value == "standard")
      c.timing_preset = TimingPresetKind::TpccStandard;
    else if (value == "calibrated")
      c.timing_preset = TimingPresetKind::PaperCalibrated;
    else
      bad_value(key, value, "'standard' or 'calibrated'");
  } else if (key == "timing-scale") {
    c.timing_scale = parse_positive_double(key, value);
  } else if (key == "retry-cap") {
    c.retry_cap = static_cast<int>(parse_int(key, value, 0));
  } else if (key == "retry-backoff-ms") {
    c.retry_backoff_ms = static_cast<int>(parse_int(key, value, 0));
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

BenchConfig parse_config(std::istream& is) {
  BenchConfig c;
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) +
                        ": expected key=value, got '" + line + "'");
    apply_config_entry(c, trim(line.substr(0, eq)),
                       trim(line.substr(eq + 1)));
  }
  return c;
}

BenchConfig load_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file: " + path);
  return parse_config(is);
}

}  // namespace tpcc
