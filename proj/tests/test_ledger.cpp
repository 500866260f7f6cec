#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tpcc/ledger.hpp"
#include "tpcc/rng.hpp"

using namespace tpcc;

namespace {

WorldState small_state() {
  WorldState s;
  s.put("a", "1", {0, 0});
  s.put("b", "2", {0, 1});
  s.put("c", "3", {0, 2});
  return s;
}

EndorsedTx make_tx(const std::string& id, const ReadWriteSet& rws,
                   Time arrived = 0) {
  EndorsedTx tx;
  tx.tx_id = id;
  tx.submitter_id = id;
  tx.arrived_at = arrived;
  tx.rw_set = rws;
  tx.bytes = rws.write_bytes() + 128;
  return tx;
}

}  // namespace

TEST_CASE("world state get/put/del and scan") {
  WorldState s = small_state();
  CHECK(s.get("a")->value == "1");
  CHECK(s.get("zz") == nullptr);
  s.del("b");
  CHECK(s.get("b") == nullptr);
  CHECK(s.size() == 2);

  auto all = s.scan("", "\x7f");
  REQUIRE(all.size() == 2);
  CHECK(all[0].first == "a");
  CHECK(all[1].first == "c");

  auto limited = s.scan("a", "z", 1);
  REQUIRE(limited.size() == 1);
  CHECK(limited[0].first == "a");
}

TEST_CASE("fork shares the frozen base; mutations stay private") {
  WorldState s = small_state();
  s.freeze();
  WorldState f1 = s.fork();
  WorldState f2 = s.fork();
  f1.put("a", "changed", {1, 0});
  f1.del("c");
  CHECK(f2.get("a")->value == "1");
  CHECK(f2.get("c")->value == "3");
  CHECK(s.get("a")->value == "1");
  CHECK(f1.get("a")->value == "changed");
  CHECK(f1.size() == 2);

  // Scans across the base/delta overlay merge and dedup.
  auto scan = f1.scan("", "\x7f");
  REQUIRE(scan.size() == 2);
  CHECK(scan[0].second.value == "changed");
  CHECK(scan[1].first == "b");
}

TEST_CASE("state hash covers versions, content hash does not") {
  WorldState a = small_state();
  WorldState b = small_state();
  CHECK(a.state_hash() == b.state_hash());
  CHECK(a.content_hash() == b.content_hash());

  WorldState c;
  c.put("a", "1", {5, 9});  // same bytes, different version
  c.put("b", "2", {0, 1});
  c.put("c", "3", {0, 2});
  CHECK(c.content_hash() == a.content_hash());
  CHECK(c.state_hash() != a.state_hash());

  c.put("a", "x", {5, 9});
  CHECK(c.content_hash() != a.content_hash());
}

TEST_CASE("endorsement context records reads once and overlays writes") {
  WorldState s = small_state();
  EndorsementContext ctx(s);

  CHECK(ctx.get("a") == "1");
  CHECK(ctx.get("a") == "1");
  CHECK(ctx.get("missing") == std::nullopt);
  ctx.put("a", "10");
  CHECK(ctx.get("a") == "10");  // read-your-writes
  ctx.del("b");
  CHECK(ctx.get("b") == std::nullopt);

  const auto& rws = ctx.rw_set();
  CHECK(rws.reads.size() == 2);  // a, missing; b never read from state
  CHECK(rws.reads.at("a") == Version{0, 0});
  CHECK(rws.reads.at("missing") == std::nullopt);
  CHECK(rws.writes.at("a") == "10");
  CHECK(rws.writes.at("b") == std::nullopt);

  const AccessStats st = ctx.stats();
  CHECK(st.read_count == 2);
  CHECK(st.write_count == 2);
}

TEST_CASE("range reads observe committed versions and merge own writes") {
  WorldState s = small_state();
  EndorsementContext ctx(s);
  ctx.put("ab", "new");
  ctx.del("b");
  const auto out = ctx.get_range("a", "z");
  REQUIRE(out.size() == 3);
  CHECK(out[0].first == "a");
  CHECK(out[1].first == "ab");
  CHECK(out[1].second == "new");
  CHECK(out[2].first == "c");

  REQUIRE(ctx.rw_set().range_reads.size() == 1);
  const auto& rr = ctx.rw_set().range_reads[0];
  // Observed set is the committed view only: a, b, c.
  REQUIRE(rr.observed.size() == 3);
  CHECK(rr.observed[1].first == "b");
}

TEST_CASE("orderer cuts on count: 25 submissions at max 10 -> 10,10,5") {
  BlockConfig cfg;
  cfg.max_tx = 10;
  Orderer orderer(cfg);
  std::vector<std::size_t> sizes;
  for (int i = 0; i < 25; ++i) {
    ReadWriteSet rws;
    rws.writes["k" + std::to_string(i)] = "v";
    if (auto b = orderer.enqueue(make_tx("tx" + std::to_string(i), rws,
                                         static_cast<Time>(i)),
                                 static_cast<Time>(i)))
      sizes.push_back(b->transactions.size());
  }
  if (auto b = orderer.on_timer(seconds_to_time(10)))
    sizes.push_back(b->transactions.size());
  REQUIRE(sizes.size() == 3);
  CHECK(sizes[0] == 10);
  CHECK(sizes[1] == 10);
  CHECK(sizes[2] == 5);
}

TEST_CASE("orderer cuts on bytes and on timeout") {
  BlockConfig cfg;
  cfg.max_bytes = 400;
  Orderer orderer(cfg);
  ReadWriteSet rws;
  rws.writes["key"] = std::string(100, 'x');
  CHECK(!orderer.enqueue(make_tx("a", rws), 0).has_value());
  auto block = orderer.enqueue(make_tx("b", rws), 1);
  REQUIRE(block.has_value());
  CHECK(block->cut_reason == BlockCutReason::MaxBytes);

  // Timeout cut: only fires once the oldest pending tx has aged block_time.
  CHECK(!orderer.enqueue(make_tx("c", rws, millis_to_time(5)),
                         millis_to_time(5))
             .has_value());
  CHECK(!orderer.on_timer(millis_to_time(50)).has_value());
  auto timed = orderer.on_timer(millis_to_time(105));
  REQUIRE(timed.has_value());
  CHECK(timed->cut_reason == BlockCutReason::Timeout);
  CHECK(timed->transactions.size() == 1);
  CHECK(orderer.next_block_no() == 2);
}

TEST_CASE("blocks order transactions by arrival with stable tie-breaks") {
  Orderer orderer(BlockConfig{});
  ReadWriteSet rws;
  rws.writes["k"] = "v";
  orderer.enqueue(make_tx("late", rws, 30), 30);
  orderer.enqueue(make_tx("z-tied", rws, 10), 30);
  orderer.enqueue(make_tx("a-tied", rws, 10), 30);
  auto block = orderer.on_timer(seconds_to_time(1));
  REQUIRE(block.has_value());
  REQUIRE(block->transactions.size() == 3);
  CHECK(block->transactions[0].tx_id == "a-tied");
  CHECK(block->transactions[1].tx_id == "z-tied");
  CHECK(block->transactions[2].tx_id == "late");
}

TEST_CASE("intra-block conflict: same key read by two txs -> valid, conflict") {
  WorldState s = small_state();
  // Both transactions read key a at version (0,0) and write it.
  ReadWriteSet r1, r2;
  r1.reads["a"] = Version{0, 0};
  r1.writes["a"] = "first";
  r2.reads["a"] = Version{0, 0};
  r2.writes["a"] = "second";

  Block block;
  block.block_no = 1;
  block.transactions = {make_tx("t1", r1), make_tx("t2", r2)};
  const auto v = validate_and_commit(s, block);
  REQUIRE(v.size() == 2);
  CHECK(v[0].status == ValidationStatus::Valid);
  CHECK(v[1].status == ValidationStatus::MvccConflict);
  CHECK(s.get("a")->value == "first");
  CHECK(s.get("a")->version == Version{1, 0});
  CHECK(s.height() == 2);
}

TEST_CASE("disjoint transactions in one block all commit") {
  WorldState s = small_state();
  ReadWriteSet r1, r2;
  r1.reads["a"] = Version{0, 0};
  r1.writes["x"] = "1";
  r2.reads["b"] = Version{0, 1};
  r2.writes["y"] = "2";
  Block block;
  block.block_no = 1;
  block.transactions = {make_tx("t1", r1), make_tx("t2", r2)};
  const auto v = validate_and_commit(s, block);
  CHECK(v[0].status == ValidationStatus::Valid);
  CHECK(v[1].status == ValidationStatus::Valid);
  CHECK(s.get("y")->version == Version{1, 1});
}

TEST_CASE("a read of an absent key conflicts when the key appears") {
  WorldState s = small_state();
  ReadWriteSet creator, reader;
  creator.reads["new"] = std::nullopt;
  creator.writes["new"] = "v";
  reader.reads["new"] = std::nullopt;
  reader.writes["other"] = "w";
  Block block;
  block.block_no = 1;
  block.transactions = {make_tx("t1", creator), make_tx("t2", reader)};
  const auto v = validate_and_commit(s, block);
  CHECK(v[0].status == ValidationStatus::Valid);
  CHECK(v[1].status == ValidationStatus::MvccConflict);
}

TEST_CASE("phantom: a range read is invalidated by an insert into it") {
  WorldState s = small_state();
  ReadWriteSet inserter, scanner;
  inserter.reads["ab"] = std::nullopt;
  inserter.writes["ab"] = "phantom";
  RangeRead rr;
  rr.start = "a";
  rr.end = "b";
  rr.observed = {{"a", Version{0, 0}}};
  scanner.range_reads.push_back(rr);
  scanner.writes["out"] = "w";
  Block block;
  block.block_no = 1;
  block.transactions = {make_tx("t1", inserter), make_tx("t2", scanner)};
  const auto v = validate_and_commit(s, block);
  CHECK(v[0].status == ValidationStatus::Valid);
  CHECK(v[1].status == ValidationStatus::MvccConflict);
}

TEST_CASE("phantom: deletion from an observed range also invalidates") {
  WorldState s = small_state();
  ReadWriteSet deleter, scanner;
  deleter.reads["a"] = Version{0, 0};
  deleter.writes["a"] = std::nullopt;
  RangeRead rr;
  rr.start = "a";
  rr.end = "b";
  rr.observed = {{"a", Version{0, 0}}};
  scanner.range_reads.push_back(rr);
  scanner.writes["out"] = "w";
  Block block;
  block.block_no = 1;
  block.transactions = {make_tx("t1", deleter), make_tx("t2", scanner)};
  const auto v = validate_and_commit(s, block);
  CHECK(v[0].status == ValidationStatus::Valid);
  CHECK(v[1].status == ValidationStatus::MvccConflict);
}

TEST_CASE("limited range reads revalidate against the same limit") {
  WorldState s = small_state();
  ReadWriteSet scanner;
  RangeRead rr;
  rr.start = "a";
  rr.end = "z";
  rr.limit = 2;
  rr.observed = {{"a", Version{0, 0}}, {"b", Version{0, 1}}};
  scanner.range_reads.push_back(rr);
  scanner.writes["out"] = "w";
  Block b1;
  b1.block_no = 1;
  b1.transactions = {make_tx("t1", scanner)};
  CHECK(validate_and_commit(s, b1)[0].status == ValidationStatus::Valid);

  // An insert beyond the observed window does not disturb the limited scan,
  // but one inside the window does.
  WorldState s2 = small_state();
  s2.put("x", "beyond-window", {0, 3});
  Block b2;
  b2.block_no = 1;
  b2.transactions = {make_tx("t2", scanner)};
  CHECK(validate_and_commit(s2, b2)[0].status == ValidationStatus::Valid);

  WorldState s3 = small_state();
  s3.put("ab", "in-window", {0, 3});
  Block b3;
  b3.block_no = 1;
  b3.transactions = {make_tx("t3", scanner)};
  CHECK(validate_and_commit(s3, b3)[0].status ==
        ValidationStatus::MvccConflict);
}

// Randomized commit-order replay oracle on a synthetic increment workload:
// applying the valid transactions sequentially must reproduce the state.
TEST_CASE("block commit equals sequential replay of its valid transactions") {
  Rng rng(99);
  for (int round = 0; round < 50; ++round) {
    WorldState committed;
    for (int k = 0; k < 8; ++k)
      committed.put("k" + std::to_string(k), "0", {0, 0});
    committed.freeze();
    WorldState replay = committed.fork();

    // Build a block of random read-modify-write transactions endorsed
    // against the pre-block state.
    Block block;
    block.block_no = 1;
    const int n = static_cast<int>(rng.uniform(2, 12));
    for (int t = 0; t < n; ++t) {
      EndorsementContext ctx(committed);
      const std::string key = "k" + std::to_string(rng.uniform(0, 7));
      const auto cur = ctx.get(key);
      ctx.put(key, std::to_string(std::stoll(*cur) + 1));
      EndorsedTx tx;
      tx.tx_id = "t" + std::to_string(t);
      tx.rw_set = ctx.rw_set();
      block.transactions.push_back(std::move(tx));
    }

    const auto validations = validate_and_commit(committed, block);

    // Oracle: re-execute the valid transactions one at a time, each against
    // the current replay state, in block order.
    std::uint32_t index = 0;
    for (std::size_t i = 0; i < validations.size(); ++i, ++index) {
      if (validations[i].status != ValidationStatus::Valid) continue;
      const auto& tx = block.transactions[i];
      for (const auto& [key, value] : tx.rw_set.writes)
        replay.put(key, *value, Version{1, index});
    }
    CHECK(committed.state_hash() == replay.state_hash());
  }
}
