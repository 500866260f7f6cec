#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "tpcc/ledger.hpp"
#include "tpcc/rng.hpp"
#include "tpcc/sim.hpp"

namespace tpcc {

enum class TxStatus {
  Committed,
  BusinessRollback,
  MvccConflict,
  EndorseTimeout,
  CommitTimeout,
  Error,
  Dropped,  // submitted after round end
};

const char* tx_status_name(TxStatus s);

struct LatencyConfig {
  enum class Kind { Constant, LoadExponential };
  Kind kind = Kind::Constant;
  Time endorse_base = millis_to_time(50);
  Time commit_base = millis_to_time(80);
  // LoadExponential only: how strongly pipeline occupancy inflates the
  // mean, mean = base * (1 + load_factor * occupancy).
  double load_factor = 1.0;
  Time endorse_timeout = seconds_to_time(30);
  Time commit_timeout = seconds_to_time(60);
};

struct LedgerConfig {
  BlockConfig block;
  LatencyConfig latency;
};

// Load-dependent latency settings calibrated so that, with the standard
// closed-loop terminal mix, MVCC conflicts stay under 10% of submissions at
// ten terminals, reach roughly half at a hundred, and goodput collapses by
// four hundred.
LedgerConfig calibrated_ledger_config();

struct TxOutcome {
  std::string tx_id;
  TxStatus status = TxStatus::Error;
  std::string payload;
  AccessStats stats;
  Time submitted = 0;
  Time endorsed = 0;
  Time ordered = 0;
  Time finalized = 0;
  std::uint64_t block_no = 0;
  std::uint32_t tx_index = 0;
};

using TxCallback = std::function<void(const TxOutcome&)>;

// Transactions whose writes were applied, in global commit order; input to
// the sequential-replay oracle.
struct AppliedTx {
  std::string tx_id;
  std::string function;
  std::vector<std::string> args;
  Version version;
};

struct BlockInfo {
  std::uint64_t block_no = 0;
  BlockCutReason cut_reason = BlockCutReason::Timeout;
  Time cut_time = 0;
  std::vector<std::string> tx_ids;
};

// Execute-order-validate pipeline over the simulation clock: endorsement
// against the submission-time snapshot, a single orderer with configurable
// block cutting, and strictly serialized MVCC validate-and-commit.
class LedgerSim {
 public:
  LedgerSim(SimClock& clock, WorldState state, LedgerConfig config,
            std::uint64_t seed);

  void register_chaincode(std::string name, ChaincodeFn fn);

  void submit(std::string tx_id, std::string submitter_id,
              const std::string& function, std::vector<std::string> args,
              TxCallback callback);

  void set_accepting(bool accepting) { accepting_ = accepting; }
  std::size_t dropped_count() const { return dropped_; }

  WorldState& state() { return state_; }
  const WorldState& state() const { return state_; }

  const std::vector<AppliedTx>& applied_log() const { return applied_log_; }
  const std::vector<BlockInfo>& block_log() const { return block_log_; }
  void set_keep_applied_log(bool keep) { keep_applied_log_ = keep; }

  // Newline-delimited block records, for debugging.
  void dump_blocks(std::ostream& os) const;

  int active_endorsements() const { return active_endorsements_; }

 private:
  struct InFlight {
    std::string function;
    std::vector<std::string> args;
    TxCallback callback;
    TxOutcome outcome;
  };

  Time draw_endorse_latency();
  Time draw_commit_latency();
  void handle_block(Block block);
  void finish(const std::string& tx_id, TxStatus status);

  SimClock& clock_;
  WorldState state_;
  LedgerConfig config_;
  Rng rng_;
  std::map<std::string, ChaincodeFn> chaincodes_;
  std::map<std::string, InFlight> in_flight_;
  Orderer orderer_;
  std::uint64_t timer_token_ = 0;
  int active_endorsements_ = 0;
  int blocks_awaiting_commit_ = 0;
  Time last_commit_done_ = 0;
  bool accepting_ = true;
  std::size_t dropped_ = 0;
  bool keep_applied_log_ = true;
  std::vector<AppliedTx> applied_log_;
  std::vector<BlockInfo> block_log_;
};

}  // namespace tpcc
