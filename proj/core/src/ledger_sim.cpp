#include "tpcc/ledger_sim.hpp"

#include <cmath>

namespace tpcc {

const char* tx_status_name(TxStatus s) {
  switch (s) {
    case TxStatus::Committed: return "committed";
    case TxStatus::BusinessRollback: return "business-rollback";
    case TxStatus::MvccConflict: return "mvcc-conflict";
    case TxStatus::EndorseTimeout: return "endorsement-timeout";
    case TxStatus::CommitTimeout: return "commit-timeout";
    case TxStatus::Error: return "error";
    case TxStatus::Dropped: return "dropped";
  }
  return "?";
}

LedgerConfig calibrated_ledger_config() {
  LedgerConfig c;
  c.block.block_time = millis_to_time(80);
  c.latency.kind = LatencyConfig::Kind::LoadExponential;
  c.latency.endorse_base = millis_to_time(45);
  c.latency.commit_base = millis_to_time(15);
  c.latency.load_factor = 0.4;
  return c;
}

LedgerSim::LedgerSim(SimClock& clock, WorldState state, LedgerConfig config,
                     std::uint64_t seed)
    : clock_(clock),
      state_(std::move(state)),
      config_(config),
      rng_(seed ^ 0x7edbe11ed5ea7ULL),
      orderer_(config.block) {
  orderer_.set_next_block_no(state_.height());
  last_commit_done_ = clock_.now();
}

void LedgerSim::register_chaincode(std::string name, ChaincodeFn fn) {
  chaincodes_[std::move(name)] = std::move(fn);
}

Time LedgerSim::draw_endorse_latency() {
  const auto& lat = config_.latency;
  if (lat.kind == LatencyConfig::Kind::Constant) return lat.endorse_base;
  const double mean = static_cast<double>(lat.endorse_base) *
                      (1 + lat.load_factor * active_endorsements_);
  return seconds_to_time(-time_to_seconds(static_cast<Time>(mean)) *
                         std::log(rng_.uniform01()));
}

Time LedgerSim::draw_commit_latency() {
  const auto& lat = config_.latency;
  if (lat.kind == LatencyConfig::Kind::Constant) return lat.commit_base;
  // Couple to endorsement occupancy (overall peer load), not to the commit
  // queue itself: queue-coupled service time cannot recover from a backlog.
  const double mean = static_cast<double>(lat.commit_base) *
                      (1 + lat.load_factor * active_endorsements_);
  return seconds_to_time(-time_to_seconds(static_cast<Time>(mean)) *
                         std::log(rng_.uniform01()));
}

void LedgerSim::finish(const std::string& tx_id, TxStatus status) {
  auto node = in_flight_.extract(tx_id);
  if (node.empty()) return;
  InFlight& tx = node.mapped();
  tx.outcome.status = status;
  tx.outcome.finalized = clock_.now();
  if (tx.callback) tx.callback(tx.outcome);
}

void LedgerSim::submit(std::string tx_id, std::string submitter_id,
                       const std::string& function,
                       std::vector<std::string> args, TxCallback callback) {
  const Time now = clock_.now();
  if (!accepting_) {
    ++dropped_;
    TxOutcome out;
    out.tx_id = std::move(tx_id);
    out.status = TxStatus::Dropped;
    out.submitted = now;
    out.finalized = now;
    if (callback) clock_.schedule_in(0, [callback, out] { callback(out); });
    return;
  }

  auto it = chaincodes_.find(function);
  if (it == chaincodes_.end()) {
    // Unknown function names are rejected at the contract-API boundary.
    TxOutcome out;
    out.tx_id = std::move(tx_id);
    out.status = TxStatus::Error;
    out.payload = "unknown chaincode function: " + function;
    out.submitted = now;
    out.finalized = now;
    if (callback) clock_.schedule_in(0, [callback, out] { callback(out); });
    return;
  }

  ++active_endorsements_;
  const Time latency = draw_endorse_latency();

  // Execute against the submission-time snapshot; concurrent commits cannot
  // alter the observed reads.
  EndorsementContext ctx(state_);
  ChaincodeResult result;
  try {
    result = it->second(ctx, args);
  } catch (const BusinessRollback& rb) {
    result.outcome = ChaincodeOutcome::BusinessRollback;
    result.payload = rb.what();
  } catch (const std::exception& e) {
    result.outcome = ChaincodeOutcome::Error;
    result.payload = e.what();
  }
  if (result.outcome != ChaincodeOutcome::Ok) ctx.discard_writes();

  InFlight tx;
  tx.function = function;
  tx.args = std::move(args);
  tx.callback = std::move(callback);
  tx.outcome.tx_id = tx_id;
  tx.outcome.payload = result.payload;
  tx.outcome.stats = ctx.stats();
  tx.outcome.submitted = now;

  const auto& lat = config_.latency;
  if (latency > lat.endorse_timeout) {
    in_flight_.emplace(tx_id, std::move(tx));
    clock_.schedule_in(lat.endorse_timeout, [this, tx_id] {
      --active_endorsements_;
      finish(tx_id, TxStatus::EndorseTimeout);
    });
    return;
  }

  EndorsedTx endorsed;
  endorsed.tx_id = tx_id;
  endorsed.submitter_id = std::move(submitter_id);
  endorsed.submitted_at = now;
  endorsed.rw_set = ctx.rw_set();
  endorsed.bytes = endorsed.rw_set.write_bytes() + 128;

  const ChaincodeOutcome outcome = result.outcome;
  in_flight_.emplace(tx_id, std::move(tx));
  clock_.schedule_in(latency, [this, tx_id, outcome,
                               endorsed = std::move(endorsed)]() mutable {
    --active_endorsements_;
    auto it = in_flight_.find(tx_id);
    if (it == in_flight_.end()) return;
    it->second.outcome.endorsed = clock_.now();
    if (outcome == ChaincodeOutcome::BusinessRollback) {
      finish(tx_id, TxStatus::BusinessRollback);
      return;
    }
    if (outcome == ChaincodeOutcome::Error) {
      finish(tx_id, TxStatus::Error);
      return;
    }
    endorsed.arrived_at = clock_.now();
    if (auto block = orderer_.enqueue(std::move(endorsed), clock_.now())) {
      ++timer_token_;
      handle_block(std::move(*block));
    } else if (orderer_.pending_count() == 1) {
      const std::uint64_t token = ++timer_token_;
      clock_.schedule_at(*orderer_.next_deadline(), [this, token] {
        if (token != timer_token_) return;
        if (auto block = orderer_.on_timer(clock_.now())) {
          ++timer_token_;
          handle_block(std::move(*block));
        }
      });
    }
  });
}

void LedgerSim::handle_block(Block block) {
  for (const auto& tx : block.transactions) {
    if (auto it = in_flight_.find(tx.tx_id); it != in_flight_.end()) {
      it->second.outcome.ordered = clock_.now();
      it->second.outcome.block_no = block.block_no;
    }
  }
  BlockInfo info;
  info.block_no = block.block_no;
  info.cut_reason = block.cut_reason;
  info.cut_time = block.cut_time;
  for (const auto& tx : block.transactions) info.tx_ids.push_back(tx.tx_id);
  block_log_.push_back(std::move(info));

  ++blocks_awaiting_commit_;
  const Time start = std::max(clock_.now(), last_commit_done_);
  const Time done = start + draw_commit_latency();
  last_commit_done_ = done;

  clock_.schedule_at(done, [this, block = std::move(block)]() mutable {
    --blocks_awaiting_commit_;
    const Time now = clock_.now();
    auto validations = validate_and_commit(state_, block);
    for (std::size_t i = 0; i < validations.size(); ++i) {
      const auto& tx = block.transactions[i];
      const bool valid = validations[i].status == ValidationStatus::Valid;
      if (valid && keep_applied_log_) {
        if (auto it = in_flight_.find(tx.tx_id); it != in_flight_.end()) {
          applied_log_.push_back(AppliedTx{
              tx.tx_id, it->second.function, it->second.args,
              Version{block.block_no, static_cast<std::uint32_t>(i)}});
        }
      }
      if (auto it = in_flight_.find(tx.tx_id); it != in_flight_.end())
        it->second.outcome.tx_index = static_cast<std::uint32_t>(i);
      const bool late =
          now - tx.submitted_at > config_.latency.commit_timeout;
      TxStatus status = late ? TxStatus::CommitTimeout
                             : (valid ? TxStatus::Committed
                                      : TxStatus::MvccConflict);
      finish(tx.tx_id, status);
    }
  });
}

void LedgerSim::dump_blocks(std::ostream& os) const {
  for (const auto& b : block_log_) {
    os << "block=" << b.block_no << " reason=";
    switch (b.cut_reason) {
      case BlockCutReason::Timeout: os << "timeout"; break;
      case BlockCutReason::MaxCount: os << "max-count"; break;
      case BlockCutReason::MaxBytes: os << "max-bytes"; break;
    }
    os << " cut_time_us=" << b.cut_time << " txs=";
    for (std::size_t i = 0; i < b.tx_ids.size(); ++i) {
      if (i) os << ',';
      os << b.tx_ids[i];
    }
    os << '\n';
  }
}

}  // namespace tpcc
