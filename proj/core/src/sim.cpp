#include "tpcc/sim.hpp"

namespace tpcc {

Time SimClock::real_now() const {
  if (mode_ == ClockMode::Virtual || !epoch_set_) return now_;
  return std::chrono::duration_cast<std::chrono::microseconds>(
             std::chrono::steady_clock::now() - epoch_)
      .count();
}

void SimClock::schedule_at(Time t, std::function<void()> fn) {
  std::lock_guard lock(mutex_);
  if (t < now_) t = now_;
  queue_.emplace(t, Event{next_seq_++, std::move(fn)});
  cv_.notify_all();
}

void SimClock::post(Time dt, std::function<void()> fn) {
  std::lock_guard lock(mutex_);
  queue_.emplace(now_ + dt, Event{next_seq_++, std::move(fn)});
  cv_.notify_all();
}

void SimClock::stop() {
  std::lock_guard lock(mutex_);
  stopped_ = true;
  cv_.notify_all();
}

bool SimClock::pop_next(std::function<void()>& fn) {
  std::unique_lock lock(mutex_);
  if (!epoch_set_) {
    epoch_ = std::chrono::steady_clock::now() - std::chrono::microseconds(now_);
    epoch_set_ = true;
  }
  for (;;) {
    if (stopped_) return false;
    if (queue_.empty()) {
      if (mode_ == ClockMode::Virtual) return false;
      // Wall mode: the queue can be refilled by post(); give up after a
      // short idle wait so the loop terminates once producers are done.
      if (cv_.wait_for(lock, std::chrono::milliseconds(50)) ==
              std::cv_status::timeout &&
          queue_.empty())
        return false;
      continue;
    }
    auto it = queue_.begin();
    const Time t = it->first;
    if (mode_ == ClockMode::Wall) {
      const auto deadline = epoch_ + std::chrono::microseconds(t);
      if (std::chrono::steady_clock::now() < deadline) {
        // An earlier event may be posted while we wait.
        cv_.wait_until(lock, deadline);
        continue;
      }
    }
    now_ = t;
    fn = std::move(it->second.fn);
    queue_.erase(it);
    return true;
  }
}

void SimClock::run() {
  std::function<void()> fn;
  while (pop_next(fn)) fn();
}

}  // namespace tpcc
