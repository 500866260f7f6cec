#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>

#include "tpcc/domain.hpp"
#include "tpcc/ledger_sim.hpp"
#include "tpcc/multiplexer.hpp"
#include "tpcc/rng.hpp"
#include "tpcc/sim.hpp"

namespace tpcc {

// Per-profile timing constraints. Think time is drawn as -mean * ln(u),
// truncated at 10x the mean.
struct TimingPreset {
  double menu_s = 0.1;
  std::array<double, 5> keying_s{};      // indexed by Profile
  std::array<double, 5> think_mean_s{};
};

// TPC-C clause 5.2 constants.
TimingPreset tpcc_standard_preset();
// Shrink factor putting ten standard terminals at roughly one request per
// second in aggregate.
inline constexpr double kPaperCalibrationScale = 0.46;
// Standard constants scaled so ten terminals generate roughly one request
// per second, matching the observed workload rate.
TimingPreset paper_calibrated_preset();
TimingPreset scale_preset(TimingPreset p, double factor);

enum class TimingPresetKind { TpccStandard, PaperCalibrated };
TimingPreset make_preset(TimingPresetKind kind, double extra_scale = 1.0);

// Mix-weighted mean of one request cycle (menu + keying + think); used to
// spread terminal start times over a full cycle so the opening submissions
// do not arrive as one wave.
Time preset_mean_cycle(const TimingPreset& p);

// Weighted profile mix: New Order 45%, Payment 43%, the rest 4% each.
Profile next_profile(Rng& rng);

struct TerminalConfig {
  int terminal_id = 0;
  std::int64_t home_w = 1;
  std::int64_t home_d = 1;
  int warehouse_count = 1;
  NurandConstants constants;
  TimingPreset timing;
  int retry_cap = 5;
  Time retry_backoff = 0;
};

// A TPC-C terminal: sequential request cycle (menu, keying, response, think)
// with the deferred-delivery exception and MVCC-conflict resubmission.
// Passive state machine; driven by its multiplexer's thread.
class Terminal {
 public:
  using Submit = std::function<void(TerminalRequest)>;

  Terminal(SimClock& clock, TerminalConfig config, std::uint64_t seed,
           Submit submit);

  void start(Time at);
  void stop() { active_ = false; }

  // Final outcome of a dispatched request. Returns true when the request
  // will be resubmitted.
  bool on_response(const TerminalRequest& request, TxStatus status);

  std::int64_t generated_count() const { return next_seq_; }
  const std::map<Profile, std::int64_t>& profile_counts() const {
    return profile_counts_;
  }
  int id() const { return config_.terminal_id; }

 private:
  void generate_next(Time from, Time think);
  Time draw_think(Profile p);

  SimClock& clock_;
  TerminalConfig config_;
  Rng rng_;
  Submit submit_;
  bool active_ = false;
  bool awaiting_ = false;  // a non-deferred request is in flight
  std::int64_t next_seq_ = 0;
  std::map<Profile, std::int64_t> profile_counts_;
};

}  // namespace tpcc
