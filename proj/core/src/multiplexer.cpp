#include "tpcc/multiplexer.hpp"

#include <algorithm>
#include <stdexcept>

namespace tpcc {

PrecisionSummary precision_report(std::vector<PrecisionSample> samples) {
  if (samples.empty())
    throw std::invalid_argument("precision_report: no samples");
  std::sort(samples.begin(), samples.end(),
            [](const PrecisionSample& a, const PrecisionSample& b) {
              return a.d < b.d;
            });
  auto quantile = [&samples](double q) {
    const auto idx = static_cast<std::size_t>(
        q * static_cast<double>(samples.size() - 1) + 0.5);
    return samples[idx].d;
  };
  PrecisionSummary s;
  s.count = samples.size();
  s.min = samples.front().d;
  s.q1 = quantile(0.25);
  s.median = quantile(0.5);
  s.q3 = quantile(0.75);
  s.max = samples.back().d;
  s.violations = static_cast<std::size_t>(
      std::count_if(samples.begin(), samples.end(),
                    [](const PrecisionSample& p) { return p.d < 0; }));
  return s;
}

Multiplexer::Multiplexer(SimClock& clock, Dispatch dispatch)
    : clock_(clock), dispatch_(std::move(dispatch)) {}

void Multiplexer::push(TerminalRequest request) {
  ++pushes_;
  queue_.insert(std::move(request));
  if (clock_.mode() == ClockMode::Virtual) {
    arm_virtual();
  } else if (!busy_) {
    pop_next_wall();
  }
}

void Multiplexer::arm_virtual() {
  if (queue_.empty()) return;
  const std::uint64_t token = ++wake_token_;
  clock_.schedule_at(queue_.begin()->scheduled, [this, token] {
    if (token != wake_token_) return;
    drain_virtual();
    arm_virtual();
  });
}

void Multiplexer::drain_virtual() {
  const Time now = clock_.now();
  while (!queue_.empty() && queue_.begin()->scheduled <= now) {
    TerminalRequest req = *queue_.begin();
    queue_.erase(queue_.begin());
    ++pops_;
    samples_.push_back(
        {req.scheduled, req.scheduled, 0, req.terminal_id, req.profile});
    dispatch_(req);
  }
}

void Multiplexer::pop_next_wall() {
  if (queue_.empty()) {
    busy_ = false;
    return;
  }
  busy_ = true;
  TerminalRequest req = *queue_.begin();
  queue_.erase(queue_.begin());
  ++pops_;
  // The reserve is measured at pop, before the wait: how much time the
  // dispatcher has in hand when it picks the request up.
  const Time t1 = clock_.real_now();
  samples_.push_back(
      {t1, req.scheduled, req.scheduled - t1, req.terminal_id, req.profile});
  clock_.schedule_at(std::max(req.scheduled, clock_.now()),
                     [this, req = std::move(req)] {
                       dispatch_(req);
                       pop_next_wall();
                     });
}

}  // namespace tpcc
