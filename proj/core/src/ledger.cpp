#include "tpcc/ledger.hpp"

#include <algorithm>

namespace tpcc {

std::size_t ReadWriteSet::write_bytes() const {
  std::size_t n = 0;
  for (const auto& [k, v] : writes) {
    n += k.size();
    if (v) n += v->size();
  }
  return n;
}

// ---------------------------------------------------------------------------
// WorldState

WorldState::WorldState() : base_(std::make_shared<Map>()) {}

const VersionedValue* WorldState::get(const std::string& key) const {
  if (auto it = delta_.find(key); it != delta_.end()) return &it->second;
  if (tombstones_.contains(key)) return nullptr;
  if (auto it = base_->find(key); it != base_->end()) return &it->second;
  return nullptr;
}

void WorldState::put(const std::string& key, std::string value,
                     Version version) {
  tombstones_.erase(key);
  delta_[key] = VersionedValue{std::move(value), version};
}

void WorldState::del(const std::string& key) {
  delta_.erase(key);
  if (base_->contains(key)) tombstones_.insert(key);
}

std::vector<std::pair<std::string, VersionedValue>> WorldState::scan(
    const std::string& start, const std::string& end,
    std::size_t limit) const {
  std::vector<std::pair<std::string, VersionedValue>> out;
  auto bit = base_->lower_bound(start);
  const auto bend = base_->lower_bound(end);
  auto dit = delta_.lower_bound(start);
  const auto dend = delta_.lower_bound(end);

  while (bit != bend || dit != dend) {
    if (limit != 0 && out.size() >= limit) break;
    if (dit == dend || (bit != bend && bit->first < dit->first)) {
      if (!tombstones_.contains(bit->first))
        out.emplace_back(bit->first, bit->second);
      ++bit;
    } else {
      if (bit != bend && bit->first == dit->first) ++bit;  // shadowed
      out.emplace_back(dit->first, dit->second);
      ++dit;
    }
  }
  return out;
}

void WorldState::for_each(
    const std::function<void(const std::string&, const VersionedValue&)>& fn)
    const {
  auto bit = base_->begin();
  auto dit = delta_.begin();
  while (bit != base_->end() || dit != delta_.end()) {
    if (dit == delta_.end() ||
        (bit != base_->end() && bit->first < dit->first)) {
      if (!tombstones_.contains(bit->first)) fn(bit->first, bit->second);
      ++bit;
    } else {
      if (bit != base_->end() && bit->first == dit->first) ++bit;
      fn(dit->first, dit->second);
      ++dit;
    }
  }
}

std::size_t WorldState::size() const {
  std::size_t n = 0;
  for_each([&n](const std::string&, const VersionedValue&) { ++n; });
  return n;
}

void WorldState::freeze() {
  if (delta_.empty() && tombstones_.empty()) return;
  auto merged = std::make_shared<Map>(*base_);
  for (const auto& key : tombstones_) merged->erase(key);
  for (auto& [key, value] : delta_) (*merged)[key] = std::move(value);
  base_ = std::move(merged);
  delta_.clear();
  tombstones_.clear();
}

WorldState WorldState::fork() const {
  WorldState copy;
  copy.base_ = base_;
  copy.delta_ = delta_;
  copy.tombstones_ = tombstones_;
  copy.height_ = height_;
  return copy;
}

namespace {

constexpr std::uint64_t kFnvOffset = 14695981039346656037ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

void fnv_bytes(std::uint64_t& h, const void* data, std::size_t n) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= kFnvPrime;
  }
}

void fnv_string(std::uint64_t& h, const std::string& s) {
  fnv_bytes(h, s.data(), s.size());
  const unsigned char z = 0;
  fnv_bytes(h, &z, 1);
}

void fnv_u64(std::uint64_t& h, std::uint64_t v) { fnv_bytes(h, &v, sizeof v); }

}  // namespace

std::uint64_t WorldState::state_hash() const {
  std::uint64_t h = kFnvOffset;
  for_each([&h](const std::string& key, const VersionedValue& vv) {
    fnv_string(h, key);
    fnv_string(h, vv.value);
    fnv_u64(h, vv.version.block_no);
    fnv_u64(h, vv.version.tx_index);
  });
  return h;
}

std::uint64_t WorldState::content_hash() const {
  std::uint64_t h = kFnvOffset;
  for_each([&h](const std::string& key, const VersionedValue& vv) {
    fnv_string(h, key);
    fnv_string(h, vv.value);
  });
  return h;
}

// ---------------------------------------------------------------------------
// EndorsementContext

std::optional<std::string> EndorsementContext::get(const std::string& key) {
  ++gets_;
  // Read-your-writes overlay; an overlay hit records no state read.
  if (auto it = rw_set_.writes.find(key); it != rw_set_.writes.end())
    return it->second;
  const VersionedValue* vv = snapshot_.get(key);
  if (!rw_set_.reads.contains(key))
    rw_set_.reads[key] = vv ? std::optional<Version>(vv->version)
                            : std::nullopt;
  if (!vv) return std::nullopt;
  bytes_read_ += static_cast<std::int64_t>(vv->value.size());
  return vv->value;
}

void EndorsementContext::put(const std::string& key, std::string value) {
  ++puts_;
  rw_set_.writes[key] = std::move(value);
}

void EndorsementContext::del(const std::string& key) {
  ++puts_;
  rw_set_.writes[key] = std::nullopt;
}

std::vector<std::pair<std::string, std::string>> EndorsementContext::get_range(
    const std::string& start, const std::string& end, std::size_t limit) {
  ++range_ops_;
  RangeRead rr;
  rr.start = start;
  rr.end = end;
  rr.limit = limit;

  auto committed = snapshot_.scan(start, end, limit);
  for (const auto& [key, vv] : committed) rr.observed.emplace_back(key, vv.version);
  rw_set_.range_reads.push_back(rr);

  // Merge the transaction's own writes over the committed view.
  std::map<std::string, std::optional<std::string>> merged;
  for (auto& [key, vv] : committed) merged[key] = std::move(vv.value);
  for (auto it = rw_set_.writes.lower_bound(start);
       it != rw_set_.writes.end() && it->first < end; ++it) {
    merged[it->first] = it->second;
  }

  std::vector<std::pair<std::string, std::string>> out;
  for (auto& [key, value] : merged) {
    if (!value) continue;  // deleted by this transaction
    if (limit != 0 && out.size() >= limit) break;
    bytes_read_ += static_cast<std::int64_t>(value->size());
    out.emplace_back(key, std::move(*value));
  }
  return out;
}

void EndorsementContext::discard_writes() { rw_set_.writes.clear(); }

AccessStats EndorsementContext::stats() const {
  AccessStats s;
  s.read_count = static_cast<std::int64_t>(rw_set_.reads.size());
  s.write_count = static_cast<std::int64_t>(rw_set_.writes.size());
  s.range_read_count = static_cast<std::int64_t>(rw_set_.range_reads.size());
  s.bytes_read = bytes_read_;
  s.bytes_written = static_cast<std::int64_t>(rw_set_.write_bytes());
  return s;
}

// ---------------------------------------------------------------------------
// Orderer

std::optional<Block> Orderer::enqueue(EndorsedTx tx, Time now) {
  pending_bytes_ += tx.bytes;
  pending_.push_back(std::move(tx));
  if (pending_.size() >= config_.max_tx)
    return cut(BlockCutReason::MaxCount, now);
  if (pending_bytes_ >= config_.max_bytes)
    return cut(BlockCutReason::MaxBytes, now);
  return std::nullopt;
}

std::optional<Block> Orderer::on_timer(Time now) {
  if (pending_.empty()) return std::nullopt;
  if (now - pending_.front().arrived_at < config_.block_time)
    return std::nullopt;
  return cut(BlockCutReason::Timeout, now);
}

std::optional<Time> Orderer::next_deadline() const {
  if (pending_.empty()) return std::nullopt;
  return pending_.front().arrived_at + config_.block_time;
}

Block Orderer::cut(BlockCutReason reason, Time now) {
  Block b;
  b.block_no = next_block_no_++;
  b.cut_reason = reason;
  b.cut_time = now;
  b.transactions = std::move(pending_);
  pending_.clear();
  pending_bytes_ = 0;
  // Arrival order with deterministic tie-breaks for simultaneous arrivals.
  std::stable_sort(b.transactions.begin(), b.transactions.end(),
                   [](const EndorsedTx& a, const EndorsedTx& b) {
                     if (a.arrived_at != b.arrived_at)
                       return a.arrived_at < b.arrived_at;
                     if (a.submitter_id != b.submitter_id)
                       return a.submitter_id < b.submitter_id;
                     return a.tx_id < b.tx_id;
                   });
  return b;
}

// ---------------------------------------------------------------------------
// Validation

namespace {

bool reads_still_current(const WorldState& state, const ReadWriteSet& rws) {
  for (const auto& [key, version] : rws.reads) {
    const VersionedValue* vv = state.get(key);
    if (static_cast<bool>(vv) != version.has_value()) return false;
    if (vv && vv->version != *version) return false;
  }
  for (const auto& rr : rws.range_reads) {
    auto current = state.scan(rr.start, rr.end, rr.limit);
    if (current.size() != rr.observed.size()) return false;
    for (std::size_t i = 0; i < current.size(); ++i) {
      if (current[i].first != rr.observed[i].first ||
          current[i].second.version != rr.observed[i].second)
        return false;
    }
  }
  return true;
}

}  // namespace

std::vector<TxValidation> validate_and_commit(WorldState& state,
                                              const Block& block) {
  std::vector<TxValidation> out;
  out.reserve(block.transactions.size());
  std::uint32_t index = 0;
  for (const auto& tx : block.transactions) {
    TxValidation v;
    v.tx_id = tx.tx_id;
    if (reads_still_current(state, tx.rw_set)) {
      v.status = ValidationStatus::Valid;
      const Version version{block.block_no, index};
      for (const auto& [key, value] : tx.rw_set.writes) {
        if (value)
          state.put(key, *value, version);
        else
          state.del(key);
      }
    } else {
      v.status = ValidationStatus::MvccConflict;
    }
    out.push_back(std::move(v));
    ++index;
  }
  state.set_height(block.block_no + 1);
  return out;
}

}  // namespace tpcc
