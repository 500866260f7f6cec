#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <vector>

#include "tpcc/time.hpp"

namespace tpcc {

enum class ClockMode { Virtual, Wall };

// Single-threaded discrete-event loop. Virtual mode jumps straight to the
// next event; wall mode sleeps until its real-time deadline. post() may be
// called from other threads (used by the multi-process transport).
class SimClock {
 public:
  explicit SimClock(ClockMode mode) : mode_(mode) {}

  ClockMode mode() const { return mode_; }
  Time now() const { return now_; }

  // Elapsed real time in wall mode; equals now() in virtual mode.
  Time real_now() const;

  void schedule_at(Time t, std::function<void()> fn);
  void schedule_in(Time dt, std::function<void()> fn) {
    schedule_at(now_ + dt, std::move(fn));
  }

  // Thread-safe scheduling relative to the current time; wakes the loop.
  void post(Time dt, std::function<void()> fn);

  // Runs until the queue empties (or stop() is called).
  void run();
  void stop();

 private:
  struct Event {
    std::uint64_t seq;
    std::function<void()> fn;
  };

  bool pop_next(std::function<void()>& fn);

  ClockMode mode_;
  Time now_ = 0;
  std::uint64_t next_seq_ = 0;
  std::multimap<Time, Event> queue_;
  bool stopped_ = false;

  std::mutex mutex_;
  std::condition_variable cv_;
  std::chrono::steady_clock::time_point epoch_;
  bool epoch_set_ = false;
};

}  // namespace tpcc
