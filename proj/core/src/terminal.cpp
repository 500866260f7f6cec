#include "tpcc/terminal.hpp"

#include <cmath>

namespace tpcc {

namespace {
std::size_t profile_index(Profile p) { return static_cast<std::size_t>(p); }
}  // namespace

TimingPreset tpcc_standard_preset() {
  TimingPreset p;
  p.menu_s = 0.1;
  p.keying_s[profile_index(Profile::NewOrder)] = 18.0;
  p.keying_s[profile_index(Profile::Payment)] = 3.0;
  p.keying_s[profile_index(Profile::OrderStatus)] = 2.0;
  p.keying_s[profile_index(Profile::Delivery)] = 2.0;
  p.keying_s[profile_index(Profile::StockLevel)] = 2.0;
  p.think_mean_s[profile_index(Profile::NewOrder)] = 12.0;
  p.think_mean_s[profile_index(Profile::Payment)] = 12.0;
  p.think_mean_s[profile_index(Profile::OrderStatus)] = 10.0;
  p.think_mean_s[profile_index(Profile::Delivery)] = 5.0;
  p.think_mean_s[profile_index(Profile::StockLevel)] = 5.0;
  return p;
}

TimingPreset scale_preset(TimingPreset p, double factor) {
  p.menu_s *= factor;
  for (auto& k : p.keying_s) k *= factor;
  for (auto& t : p.think_mean_s) t *= factor;
  return p;
}

TimingPreset paper_calibrated_preset() {
  return scale_preset(tpcc_standard_preset(), kPaperCalibrationScale);
}

TimingPreset make_preset(TimingPresetKind kind, double extra_scale) {
  TimingPreset p = kind == TimingPresetKind::TpccStandard
                       ? tpcc_standard_preset()
                       : paper_calibrated_preset();
  return extra_scale == 1.0 ? p : scale_preset(p, extra_scale);
}

Time preset_mean_cycle(const TimingPreset& p) {
  // Profile mix weights: New Order 45%, Payment 43%, the rest 4% each.
  const std::array<double, 5> weights = {0.45, 0.43, 0.04, 0.04, 0.04};
  double s = p.menu_s;
  for (std::size_t i = 0; i < weights.size(); ++i)
    s += weights[i] * (p.keying_s[i] + p.think_mean_s[i]);
  return seconds_to_time(s);
}

Profile next_profile(Rng& rng) {
  const std::int64_t v = rng.uniform(1, 100);
  if (v <= 45) return Profile::NewOrder;
  if (v <= 88) return Profile::Payment;
  if (v <= 92) return Profile::OrderStatus;
  if (v <= 96) return Profile::Delivery;
  return Profile::StockLevel;
}

Terminal::Terminal(SimClock& clock, TerminalConfig config, std::uint64_t seed,
                   Submit submit)
    : clock_(clock),
      config_(std::move(config)),
      rng_(seed),
      submit_(std::move(submit)) {}

void Terminal::start(Time at) {
  active_ = true;
  generate_next(at, 0);
}

Time Terminal::draw_think(Profile p) {
  const double mean = config_.timing.think_mean_s[profile_index(p)];
  const double t = std::min(-mean * std::log(rng_.uniform01()), 10.0 * mean);
  return seconds_to_time(t);
}

void Terminal::generate_next(Time from, Time think) {
  if (!active_) return;
  const Profile profile = next_profile(rng_);
  ProfileInput input = generate_profile_input(
      profile, config_.warehouse_count, config_.home_w, config_.home_d,
      config_.constants, rng_);

  TerminalRequest req;
  req.terminal_id = config_.terminal_id;
  req.seq = next_seq_++;
  req.retry_index = 0;
  req.profile = profile;
  req.args = std::move(input.args);
  req.created = clock_.now();
  req.scheduled =
      from + think + seconds_to_time(config_.timing.menu_s) +
      seconds_to_time(config_.timing.keying_s[profile_index(profile)]);
  req.deferred = profile == Profile::Delivery;
  ++profile_counts_[profile];

  const Time scheduled = req.scheduled;
  const bool deferred = req.deferred;
  submit_(std::move(req));

  if (deferred) {
    // Deferred delivery: proceed without awaiting completion.
    generate_next(scheduled, draw_think(Profile::Delivery));
  } else {
    awaiting_ = true;
  }
}

bool Terminal::on_response(const TerminalRequest& request, TxStatus status) {
  if (status == TxStatus::MvccConflict &&
      request.retry_index < config_.retry_cap && active_) {
    TerminalRequest retry = request;
    ++retry.retry_index;
    retry.created = clock_.now();
    retry.scheduled = clock_.now() + config_.retry_backoff;
    submit_(std::move(retry));
    return true;
  }
  if (!request.deferred) {
    awaiting_ = false;
    if (active_) generate_next(clock_.now(), draw_think(request.profile));
  }
  return false;
}

}  // namespace tpcc
