#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "tpcc/domain.hpp"
#include "tpcc/ledger_sim.hpp"
#include "tpcc/multiplexer.hpp"

namespace tpcc {

// One observation per submission (retries included).
struct MetricsRecord {
  std::string tx_id;
  Profile profile = Profile::NewOrder;
  int terminal_id = 0;
  std::int64_t seq = 0;  // business request id = (terminal_id, seq)
  int retry_index = 0;
  int worker_id = 0;
  bool deferred = false;
  Time created = 0;
  Time submitted = 0;
  Time endorsed = 0;
  Time ordered = 0;
  Time finalized = 0;
  TxStatus status = TxStatus::Error;
  bool abandoned = false;  // conflicted with no retries left
  AccessStats stats;
  std::uint64_t block_no = 0;
  std::uint32_t tx_index = 0;
};

struct ProfileSummary {
  std::int64_t requests = 0;  // unique business requests
  double fraction = 0;
  std::int64_t committed = 0;
  Time latency_q1 = 0, latency_median = 0, latency_q3 = 0;
};

struct RunSummary {
  double duration_s = 0;
  std::int64_t submissions = 0;
  std::int64_t unique_requests = 0;
  double tpmc = 0;
  double request_tps = 0;   // unique business requests per second
  double goodput_tps = 0;   // committed unique business requests per second
  std::map<Profile, ProfileSummary> per_profile;
  std::map<TxStatus, std::int64_t> status_counts;
  std::map<TxStatus, double> status_fractions;
  std::int64_t abandoned = 0;
  std::optional<PrecisionSummary> precision;
};

// Committed New Orders per minute, deduplicated by business request id
// across retries, over [window_start, window_end) of finalized time.
// Throws std::invalid_argument on a zero-length window.
double compute_tpmc(const std::vector<MetricsRecord>& records,
                    Time window_start, Time window_end);

// Per-status fractions of all submissions; the pieces sum to 1.
std::map<TxStatus, double> status_fractions(
    const std::vector<MetricsRecord>& records);

// Fraction of submissions invalidated by MVCC validation.
double mvcc_conflict_fraction(const std::vector<MetricsRecord>& records);

RunSummary summarize(const std::vector<MetricsRecord>& records,
                     Time duration,
                     const std::vector<PrecisionSample>& precision);

// CSV export; documented column order, deterministic bytes.
std::string csv_header();
void write_csv(std::ostream& os, const std::vector<MetricsRecord>& records);
std::vector<MetricsRecord> read_csv(std::istream& is);

void write_summary(std::ostream& os, const RunSummary& summary);

// Fig-6-style experiment grid: 10..100 step 10, then 150..400 step 50.
std::vector<int> sweep_terminal_grid();

struct SweepRow {
  int terminals = 0;
  std::map<TxStatus, double> fractions;
  double goodput_tps = 0;
  double request_tps = 0;
};

void write_error_profile_table(std::ostream& os,
                               const std::vector<SweepRow>& rows);

// gnuplot-compatible data files
void write_rate_dat(std::ostream& os,
                    const std::vector<std::pair<int, double>>& rates);
void write_precision_dat(
    std::ostream& os,
    const std::vector<std::pair<int, PrecisionSummary>>& rows);
void write_errors_dat(std::ostream& os, const std::vector<SweepRow>& rows);

}  // namespace tpcc
