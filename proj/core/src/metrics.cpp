#include "tpcc/metrics.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace tpcc {

double compute_tpmc(const std::vector<MetricsRecord>& records,
                    Time window_start, Time window_end) {
  if (window_end <= window_start)
    throw std::invalid_argument("compute_tpmc: zero-length window");
  std::set<std::pair<int, std::int64_t>> seen;
  for (const auto& r : records) {
    if (r.profile != Profile::NewOrder) continue;
    if (r.status != TxStatus::Committed) continue;
    if (r.finalized < window_start || r.finalized >= window_end) continue;
    seen.insert({r.terminal_id, r.seq});
  }
  const double minutes = time_to_seconds(window_end - window_start) / 60.0;
  return static_cast<double>(seen.size()) / minutes;
}

std::map<TxStatus, double> status_fractions(
    const std::vector<MetricsRecord>& records) {
  std::map<TxStatus, double> out;
  if (records.empty()) return out;
  for (const auto& r : records) out[r.status] += 1.0;
  for (auto& [status, count] : out)
    count /= static_cast<double>(records.size());
  return out;
}

double mvcc_conflict_fraction(const std::vector<MetricsRecord>& records) {
  if (records.empty()) return 0;
  std::int64_t conflicts = 0;
  for (const auto& r : records)
    if (r.status == TxStatus::MvccConflict) ++conflicts;
  return static_cast<double>(conflicts) / static_cast<double>(records.size());
}

RunSummary summarize(const std::vector<MetricsRecord>& records, Time duration,
                     const std::vector<PrecisionSample>& precision) {
  RunSummary s;
  s.duration_s = time_to_seconds(duration);
  s.submissions = static_cast<std::int64_t>(records.size());

  std::set<std::pair<int, std::int64_t>> unique;
  std::set<std::pair<int, std::int64_t>> committed_unique;
  std::map<Profile, std::vector<Time>> latencies;
  std::map<Profile, std::set<std::pair<int, std::int64_t>>> per_profile_unique;

  for (const auto& r : records) {
    unique.insert({r.terminal_id, r.seq});
    per_profile_unique[r.profile].insert({r.terminal_id, r.seq});
    s.status_counts[r.status] += 1;
    if (r.abandoned) s.abandoned += 1;
    if (r.status == TxStatus::Committed) {
      committed_unique.insert({r.terminal_id, r.seq});
      latencies[r.profile].push_back(r.finalized - r.submitted);
    }
  }
  s.unique_requests = static_cast<std::int64_t>(unique.size());
  s.status_fractions = status_fractions(records);
  if (s.duration_s > 0) {
    s.request_tps = static_cast<double>(s.unique_requests) / s.duration_s;
    s.goodput_tps =
        static_cast<double>(committed_unique.size()) / s.duration_s;
    s.tpmc = compute_tpmc(records, 0, duration);
  }

  for (const auto& [profile, ids] : per_profile_unique) {
    ProfileSummary p;
    p.requests = static_cast<std::int64_t>(ids.size());
    p.fraction = s.unique_requests
                     ? static_cast<double>(p.requests) /
                           static_cast<double>(s.unique_requests)
                     : 0;
    auto& lat = latencies[profile];
    p.committed = static_cast<std::int64_t>(lat.size());
    if (!lat.empty()) {
      std::sort(lat.begin(), lat.end());
      auto q = [&lat](double f) {
        return lat[static_cast<std::size_t>(
            f * static_cast<double>(lat.size() - 1) + 0.5)];
      };
      p.latency_q1 = q(0.25);
      p.latency_median = q(0.5);
      p.latency_q3 = q(0.75);
    }
    s.per_profile[profile] = p;
  }

  if (!precision.empty()) s.precision = precision_report(precision);
  return s;
}

// ---------------------------------------------------------------------------
// CSV

std::string csv_header() {
  return "tx_id,profile,terminal_id,seq,retry_index,worker_id,deferred,"
         "created_us,submitted_us,endorsed_us,ordered_us,finalized_us,"
         "status,abandoned,read_count,write_count,range_read_count,"
         "bytes_read,bytes_written,block_no,tx_index";
}

void write_csv(std::ostream& os, const std::vector<MetricsRecord>& records) {
  os << csv_header() << '\n';
  for (const auto& r : records) {
    os << r.tx_id << ',' << profile_name(r.profile) << ',' << r.terminal_id
       << ',' << r.seq << ',' << r.retry_index << ',' << r.worker_id << ','
       << (r.deferred ? 1 : 0) << ',' << r.created << ',' << r.submitted
       << ',' << r.endorsed << ',' << r.ordered << ',' << r.finalized << ','
       << tx_status_name(r.status) << ',' << (r.abandoned ? 1 : 0) << ','
       << r.stats.read_count << ',' << r.stats.write_count << ','
       << r.stats.range_read_count << ',' << r.stats.bytes_read << ','
       << r.stats.bytes_written << ',' << r.block_no << ',' << r.tx_index
       << '\n';
  }
}

namespace {

TxStatus status_from_name(const std::string& name) {
  for (TxStatus s :
       {TxStatus::Committed, TxStatus::BusinessRollback, TxStatus::MvccConflict,
        TxStatus::EndorseTimeout, TxStatus::CommitTimeout, TxStatus::Error,
        TxStatus::Dropped}) {
    if (name == tx_status_name(s)) return s;
  }
  throw std::invalid_argument("unknown status: " + name);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = line.find(',', pos);
    out.push_back(line.substr(
        pos, comma == std::string::npos ? comma : comma - pos));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace

std::vector<MetricsRecord> read_csv(std::istream& is) {
  std::vector<MetricsRecord> out;
  std::string line;
  if (!std::getline(is, line)) return out;
  if (line != csv_header())
    throw std::invalid_argument("unexpected CSV header");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 21)
      throw std::invalid_argument("malformed CSV row: " + line);
    MetricsRecord r;
    r.tx_id = f[0];
    auto p = profile_from_name(f[1]);
    if (!p) throw std::invalid_argument("unknown profile: " + f[1]);
    r.profile = *p;
    r.terminal_id = std::stoi(f[2]);
    r.seq = std::stoll(f[3]);
    r.retry_index = std::stoi(f[4]);
    r.worker_id = std::stoi(f[5]);
    r.deferred = f[6] == "1";
    r.created = std::stoll(f[7]);
    r.submitted = std::stoll(f[8]);
    r.endorsed = std::stoll(f[9]);
    r.ordered = std::stoll(f[10]);
    r.finalized = std::stoll(f[11]);
    r.status = status_from_name(f[12]);
    r.abandoned = f[13] == "1";
    r.stats.read_count = std::stoll(f[14]);
    r.stats.write_count = std::stoll(f[15]);
    r.stats.range_read_count = std::stoll(f[16]);
    r.stats.bytes_read = std::stoll(f[17]);
    r.stats.bytes_written = std::stoll(f[18]);
    r.block_no = std::stoull(f[19]);
    r.tx_index = static_cast<std::uint32_t>(std::stoul(f[20]));
    out.push_back(std::move(r));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Reports

namespace {
std::string fixed3(double v) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(3);
  os << v;
  return os.str();
}
}  // namespace

void write_summary(std::ostream& os, const RunSummary& s) {
  os << "duration_s " << fixed3(s.duration_s) << '\n';
  os << "submissions " << s.submissions << '\n';
  os << "unique_requests " << s.unique_requests << '\n';
  os << "request_tps " << fixed3(s.request_tps) << '\n';
  os << "goodput_tps " << fixed3(s.goodput_tps) << '\n';
  os << "tpmC " << fixed3(s.tpmc) << '\n';
  os << "abandoned " << s.abandoned << '\n';
  for (const auto& [status, count] : s.status_counts) {
    os << "status " << tx_status_name(status) << ' ' << count << ' '
       << fixed3(s.status_fractions.at(status)) << '\n';
  }
  for (const auto& [profile, p] : s.per_profile) {
    os << "profile " << profile_name(profile) << " requests=" << p.requests
       << " fraction=" << fixed3(p.fraction) << " committed=" << p.committed
       << " latency_ms_q1=" << p.latency_q1 / 1000
       << " median=" << p.latency_median / 1000
       << " q3=" << p.latency_q3 / 1000 << '\n';
  }
  if (s.precision) {
    os << "precision count=" << s.precision->count
       << " min_us=" << s.precision->min << " q1_us=" << s.precision->q1
       << " median_us=" << s.precision->median
       << " q3_us=" << s.precision->q3 << " max_us=" << s.precision->max
       << " violations=" << s.precision->violations << '\n';
  }
}

std::vector<int> sweep_terminal_grid() {
  std::vector<int> grid;
  for (int t = 10; t <= 100; t += 10) grid.push_back(t);
  for (int t = 150; t <= 400; t += 50) grid.push_back(t);
  return grid;
}

namespace {
const std::vector<TxStatus>& table_statuses() {
  static const std::vector<TxStatus> statuses = {
      TxStatus::Committed,      TxStatus::BusinessRollback,
      TxStatus::MvccConflict,   TxStatus::EndorseTimeout,
      TxStatus::CommitTimeout,  TxStatus::Error,
      TxStatus::Dropped};
  return statuses;
}
}  // namespace

void write_error_profile_table(std::ostream& os,
                               const std::vector<SweepRow>& rows) {
  os << "terminals";
  for (TxStatus s : table_statuses()) os << ' ' << tx_status_name(s);
  os << " request_tps goodput_tps\n";
  for (const auto& row : rows) {
    os << row.terminals;
    for (TxStatus s : table_statuses()) {
      const auto it = row.fractions.find(s);
      os << ' ' << fixed3(it == row.fractions.end() ? 0.0 : it->second);
    }
    os << ' ' << fixed3(row.request_tps) << ' ' << fixed3(row.goodput_tps)
       << '\n';
  }
}

void write_rate_dat(std::ostream& os,
                    const std::vector<std::pair<int, double>>& rates) {
  os << "# terminals tps\n";
  for (const auto& [terminals, tps] : rates)
    os << terminals << ' ' << fixed3(tps) << '\n';
}

void write_precision_dat(
    std::ostream& os,
    const std::vector<std::pair<int, PrecisionSummary>>& rows) {
  os << "# terminals min_us q1_us median_us q3_us max_us violations\n";
  for (const auto& [terminals, p] : rows) {
    os << terminals << ' ' << p.min << ' ' << p.q1 << ' ' << p.median << ' '
       << p.q3 << ' ' << p.max << ' ' << p.violations << '\n';
  }
}

void write_errors_dat(std::ostream& os, const std::vector<SweepRow>& rows) {
  write_error_profile_table(os, rows);
}

}  // namespace tpcc
