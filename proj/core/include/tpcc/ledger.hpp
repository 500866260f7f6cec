#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tpcc/time.hpp"

namespace tpcc {

// Commit position of the transaction that last wrote a key.
struct Version {
  std::uint64_t block_no = 0;
  std::uint32_t tx_index = 0;

  auto operator<=>(const Version&) const = default;
};

struct VersionedValue {
  std::string value;
  Version version;
};

struct RangeRead {
  std::string start;
  std::string end;  // half-open
  std::size_t limit = 0;
  // Committed (key, version) pairs observed at endorsement; revalidated at
  // commit for phantom detection.
  std::vector<std::pair<std::string, Version>> observed;
};

struct ReadWriteSet {
  // Version read, or nullopt for a key that was absent.
  std::map<std::string, std::optional<Version>> reads;
  // Value written; nullopt means delete.
  std::map<std::string, std::optional<std::string>> writes;
  std::vector<RangeRead> range_reads;

  std::size_t write_bytes() const;
};

// Single authoritative versioned key-value view. Supports cheap forking from
// a frozen base so experiment runs can share one loaded state.
class WorldState {
 public:
  WorldState();

  const VersionedValue* get(const std::string& key) const;
  void put(const std::string& key, std::string value, Version version);
  void del(const std::string& key);

  // Entries with start <= key < end in lexicographic order, at most `limit`
  // (0 = unlimited).
  std::vector<std::pair<std::string, VersionedValue>> scan(
      const std::string& start, const std::string& end,
      std::size_t limit = 0) const;

  void for_each(
      const std::function<void(const std::string&, const VersionedValue&)>& fn)
      const;

  std::size_t size() const;

  // Collapses the overlay into a shared immutable base; subsequent forks
  // share it without copying.
  void freeze();
  WorldState fork() const;

  std::uint64_t height() const { return height_; }
  void set_height(std::uint64_t h) { height_ = h; }

  // Hash over (key, value, version) in key order.
  std::uint64_t state_hash() const;
  // Hash over (key, value) only; version-independent.
  std::uint64_t content_hash() const;

 private:
  using Map = std::map<std::string, VersionedValue>;
  std::shared_ptr<const Map> base_;
  Map delta_;
  std::set<std::string> tombstones_;
  std::uint64_t height_ = 0;
};

// ---------------------------------------------------------------------------
// Chaincode execution

enum class ChaincodeOutcome { Ok, BusinessRollback, Error };

struct ChaincodeResult {
  ChaincodeOutcome outcome = ChaincodeOutcome::Ok;
  std::string payload;  // rendered response record or error text
};

struct AccessStats {
  std::int64_t read_count = 0;
  std::int64_t write_count = 0;
  std::int64_t range_read_count = 0;
  std::int64_t bytes_read = 0;
  std::int64_t bytes_written = 0;
};

// Signalled by business logic to abort with no writes (e.g. the deliberate
// 1% invalid item id of New Order).
class BusinessRollback : public std::exception {
 public:
  explicit BusinessRollback(std::string reason) : reason_(std::move(reason)) {}
  const char* what() const noexcept override { return reason_.c_str(); }

 private:
  std::string reason_;
};

class NotFoundError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class AlreadyExistsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Ledger-access layer handed to executing chaincode. Captures every access
// into the transaction's read-write set, overlays the transaction's own
// writes, and tracks access statistics.
class EndorsementContext {
 public:
  explicit EndorsementContext(const WorldState& snapshot)
      : snapshot_(snapshot) {}

  std::optional<std::string> get(const std::string& key);
  void put(const std::string& key, std::string value);
  void del(const std::string& key);
  std::vector<std::pair<std::string, std::string>> get_range(
      const std::string& start, const std::string& end, std::size_t limit = 0);

  void discard_writes();

  const ReadWriteSet& rw_set() const { return rw_set_; }
  AccessStats stats() const;

 private:
  const WorldState& snapshot_;
  ReadWriteSet rw_set_;
  std::int64_t gets_ = 0;
  std::int64_t puts_ = 0;
  std::int64_t range_ops_ = 0;
  std::int64_t bytes_read_ = 0;
};

using ChaincodeFn = std::function<ChaincodeResult(
    EndorsementContext&, const std::vector<std::string>& args)>;

// ---------------------------------------------------------------------------
// Ordering and validation

enum class BlockCutReason { Timeout, MaxCount, MaxBytes };

struct EndorsedTx {
  std::string tx_id;
  std::string submitter_id;
  Time submitted_at = 0;    // client submission time
  Time arrived_at = 0;      // arrival at the orderer
  ReadWriteSet rw_set;
  std::size_t bytes = 0;
};

struct Block {
  std::uint64_t block_no = 0;
  BlockCutReason cut_reason = BlockCutReason::Timeout;
  std::vector<EndorsedTx> transactions;
  Time cut_time = 0;
};

struct BlockConfig {
  std::size_t max_tx = 500;
  std::size_t max_bytes = 10 * 1024 * 1024;
  Time block_time = millis_to_time(100);
};

// Pending-transaction pool with Fabric-style cut criteria. Time-driven cuts
// are triggered by the owner calling on_timer at oldest-arrival + block_time.
class Orderer {
 public:
  explicit Orderer(BlockConfig config) : config_(config) {}

  // Returns a block when a size criterion fires on enqueue.
  std::optional<Block> enqueue(EndorsedTx tx, Time now);
  std::optional<Block> on_timer(Time now);

  // Deadline for the oldest pending transaction, if any.
  std::optional<Time> next_deadline() const;
  std::size_t pending_count() const { return pending_.size(); }
  std::uint64_t next_block_no() const { return next_block_no_; }
  void set_next_block_no(std::uint64_t n) { next_block_no_ = n; }

 private:
  Block cut(BlockCutReason reason, Time now);

  BlockConfig config_;
  std::vector<EndorsedTx> pending_;
  std::size_t pending_bytes_ = 0;
  std::uint64_t next_block_no_ = 0;
};

enum class ValidationStatus { Valid, MvccConflict };

struct TxValidation {
  std::string tx_id;
  ValidationStatus status = ValidationStatus::Valid;
};

// MVCC validate-and-commit: walks the block in order, checking each read
// against the current state (which already includes writes of earlier valid
// transactions in the same block), and applies valid writes with
// Version(block_no, tx_index).
std::vector<TxValidation> validate_and_commit(WorldState& state,
                                              const Block& block);

}  // namespace tpcc
