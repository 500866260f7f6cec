#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "tpcc/domain.hpp"
#include "tpcc/ledger_sim.hpp"
#include "tpcc/metrics.hpp"
#include "tpcc/terminal.hpp"

namespace tpcc {

// Splits `total` items across `workers`, remainder going to the
// lowest-index workers: 10 over 3 -> [0,4) [4,7) [7,10).
std::vector<std::pair<int, int>> partition_evenly(int total, int workers);

// Round-opening agreement: everything a worker needs to generate its share
// of the workload deterministically.
struct PreparedState {
  std::uint64_t seed = 0;
  int warehouse_count = 1;
  int terminal_count = 0;
  int worker_count = 1;
  NurandConstants constants;
  std::vector<std::pair<int, int>> terminal_ranges;

  std::uint64_t hash() const;
};

PreparedState prepare_round(std::uint64_t seed, int warehouse_count,
                            int terminal_count, int worker_count);

const char* profile_function(Profile p);

// Globally unique submission id: terminal ids never repeat across workers.
std::string request_tx_id(int terminal_id, std::int64_t seq, int retry_index);

// Home assignment spreads terminals across warehouses first, then districts.
std::int64_t terminal_home_w(int terminal_id, int warehouse_count);
std::int64_t terminal_home_d(int terminal_id, int warehouse_count);

// ---------------------------------------------------------------------------
// Load round

struct LoadStats {
  std::int64_t entities = 0;
  std::int64_t batches = 0;
  std::int64_t committed_batches = 0;
  std::uint64_t state_hash = 0;
  std::uint64_t content_hash = 0;
};

// Pushes the initial population through the full endorse-order-validate
// pipeline as LOAD_BATCH transactions under a virtual clock. The returned
// state is frozen so callers can fork it cheaply.
WorldState load_world(int warehouse_count, std::uint64_t seed,
                      const NurandConstants& constants,
                      LoadStats* stats = nullptr, int batch_size = 50);

// Bypass oracle: applies the same population directly to a fresh state,
// skipping the transaction pipeline. Content hashes must agree.
WorldState load_world_direct(int warehouse_count, std::uint64_t seed,
                             const NurandConstants& constants);

// Entries under a primary-record prefix (index rows excluded).
std::int64_t count_primary_entries(const WorldState& state);

// ---------------------------------------------------------------------------
// Execution round

struct ExecutionConfig {
  int warehouse_count = 1;
  int terminal_count = 10;
  int worker_count = 1;
  std::uint64_t seed = 1;
  ClockMode clock_mode = ClockMode::Virtual;
  Time duration = seconds_to_time(60);
  TimingPreset timing;
  NurandConstants constants;
  int retry_cap = 5;
  Time retry_backoff = 0;
  bool keep_applied_log = false;
};

struct ExecutionResult {
  std::vector<MetricsRecord> records;
  std::vector<PrecisionSample> precision;       // all workers merged
  std::vector<AppliedTx> applied_log;           // empty unless kept
  std::vector<BlockInfo> block_log;
  std::uint64_t state_hash = 0;
  std::uint64_t content_hash = 0;
  std::size_t dropped = 0;
  Time duration = 0;
};

// Runs one closed-loop round: terminals feed per-worker multiplexers which
// dispatch into a shared ledger. The round closes at `duration`; in-flight
// work drains before the result is produced.
ExecutionResult run_execution(WorldState initial, const ExecutionConfig& cfg,
                              const LedgerConfig& ledger);

// Sequential re-execution of the applied log on a fork of the initial
// state, writes stamped with their original versions. An execution round's
// state hash must be reproduced exactly.
std::uint64_t replay_state_hash(const WorldState& initial,
                                const std::vector<AppliedTx>& log);

}  // namespace tpcc
