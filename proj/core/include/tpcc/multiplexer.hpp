#pragma once

#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "tpcc/domain.hpp"
#include "tpcc/sim.hpp"

namespace tpcc {

// A profile invocation with generated arguments and its scheduled
// submission time.
struct TerminalRequest {
  int terminal_id = 0;
  std::int64_t seq = 0;     // per-terminal business request number
  int retry_index = 0;
  Profile profile = Profile::NewOrder;
  std::vector<std::string> args;
  Time created = 0;
  Time scheduled = 0;
  bool deferred = false;
};

// d = scheduled - pop time; negative d is a timing-constraint violation.
struct PrecisionSample {
  Time pop_time = 0;        // t1
  Time scheduled_time = 0;  // t2
  Time d = 0;               // t2 - t1
  int terminal_id = 0;
  Profile profile = Profile::NewOrder;
};

struct PrecisionSummary {
  std::size_t count = 0;
  Time min = 0, q1 = 0, median = 0, q3 = 0, max = 0;
  std::size_t violations = 0;
};

// Throws std::invalid_argument on an empty sample set.
PrecisionSummary precision_report(std::vector<PrecisionSample> samples);

// Per-worker rate controller: sorted request queue released in scheduled
// order. Under the virtual clock dispatch is instantaneous (d = 0 exactly);
// wall-clock mode models the single-threaded pop-and-wait loop, where
// precision erodes as terminals per worker grow.
class Multiplexer {
 public:
  using Dispatch = std::function<void(const TerminalRequest&)>;

  Multiplexer(SimClock& clock, Dispatch dispatch);

  void push(TerminalRequest request);

  const std::vector<PrecisionSample>& samples() const { return samples_; }
  std::size_t push_count() const { return pushes_; }
  std::size_t pop_count() const { return pops_; }
  std::size_t queue_length() const { return queue_.size(); }

 private:
  struct Order {
    bool operator()(const TerminalRequest& a, const TerminalRequest& b) const {
      if (a.scheduled != b.scheduled) return a.scheduled < b.scheduled;
      if (a.terminal_id != b.terminal_id) return a.terminal_id < b.terminal_id;
      return a.seq != b.seq ? a.seq < b.seq : a.retry_index < b.retry_index;
    }
  };

  void arm_virtual();
  void drain_virtual();
  void pop_next_wall();

  SimClock& clock_;
  Dispatch dispatch_;
  std::multiset<TerminalRequest, Order> queue_;
  std::vector<PrecisionSample> samples_;
  std::size_t pushes_ = 0;
  std::size_t pops_ = 0;
  std::uint64_t wake_token_ = 0;
  bool busy_ = false;  // wall mode: a popped request awaits its t2
};

}  // namespace tpcc
