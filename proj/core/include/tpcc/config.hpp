#pragma once

#include <cstdint>
#include <istream>
#include <string>

#include "tpcc/ledger_sim.hpp"
#include "tpcc/terminal.hpp"

namespace tpcc {

// Benchmark configuration as read from a key=value file; '#' starts a
// comment. Every key has a flag counterpart; flags win over the file.
//
//   warehouses              int >= 1
//   terminals-per-warehouse int >= 1
//   workers                 int >= 1
//   seed                    uint64
//   clock                   virtual | wall
//   duration-s              double > 0
//   block-time-ms           int > 0
//   block-max-tx            int > 0
//   block-max-bytes         int > 0
//   endorse-base-ms         int > 0
//   commit-base-ms          int > 0
//   endorse-timeout-ms      int > 0
//   commit-timeout-ms       int > 0
//   latency-model           constant | load-exponential
//   latency-load-factor     double > 0 (load-exponential only)
//   timing-preset           standard | calibrated
//   timing-scale            double > 0
//   retry-cap               int >= 0
//   retry-backoff-ms        int >= 0
struct BenchConfig {
  int warehouses = 1;
  int terminals_per_warehouse = 10;
  int workers = 1;
  std::uint64_t seed = 1;
  ClockMode clock_mode = ClockMode::Virtual;
  double duration_s = 600;
  LedgerConfig ledger;
  TimingPresetKind timing_preset = TimingPresetKind::PaperCalibrated;
  double timing_scale = 1.0;
  int retry_cap = 5;
  int retry_backoff_ms = 0;

  int terminal_count() const { return warehouses * terminals_per_warehouse; }
  TimingPreset timing() const {
    return make_preset(timing_preset, timing_scale);
  }
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Applies one key=value setting; throws ConfigError naming the offending
// key on an unknown key or a value that fails validation.
void apply_config_entry(BenchConfig& config, const std::string& key,
                        const std::string& value);

BenchConfig parse_config(std::istream& is);
BenchConfig load_config_file(const std::string& path);

}  // namespace tpcc
