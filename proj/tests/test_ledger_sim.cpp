#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>

#include "tpcc/ledger_sim.hpp"

using namespace tpcc;

namespace {

// Chaincode: "incr key" reads a counter key and bumps it.
ChaincodeResult incr(EndorsementContext& ctx,
                     const std::vector<std::string>& args) {
  const std::string& key = args.at(0);
  const auto cur = ctx.get(key);
  const std::int64_t v = cur ? std::stoll(*cur) : 0;
  ctx.put(key, std::to_string(v + 1));
  return {ChaincodeOutcome::Ok, std::to_string(v + 1)};
}

ChaincodeResult boom(EndorsementContext& ctx,
                     const std::vector<std::string>&) {
  ctx.put("should-not-persist", "x");
  throw BusinessRollback("deliberate");
}

ChaincodeResult broken(EndorsementContext& ctx,
                       const std::vector<std::string>&) {
  ctx.put("should-not-persist", "x");
  throw std::runtime_error("internal failure");
}

struct Fixture {
  SimClock clock{ClockMode::Virtual};
  std::map<std::string, TxOutcome> outcomes;

  LedgerSim make(LedgerConfig config, WorldState state = WorldState()) {
    LedgerSim sim(clock, std::move(state), config, 7);
    sim.register_chaincode("incr", incr);
    sim.register_chaincode("boom", boom);
    sim.register_chaincode("broken", broken);
    return sim;
  }

  TxCallback record() {
    return [this](const TxOutcome& o) { outcomes[o.tx_id] = o; };
  }
};

}  // namespace

TEST_CASE("single transaction walks endorse -> order -> commit") {
  Fixture f;
  LedgerSim sim = f.make(LedgerConfig{});
  sim.submit("tx1", "c1", "incr", {"counter"}, f.record());
  f.clock.run();

  REQUIRE(f.outcomes.count("tx1") == 1);
  const TxOutcome& o = f.outcomes["tx1"];
  CHECK(o.status == TxStatus::Committed);
  CHECK(o.payload == "1");
  CHECK(o.submitted == 0);
  // Constant latency: endorse 50ms; block cut at arrival+100ms; commit +80ms.
  CHECK(o.endorsed == millis_to_time(50));
  CHECK(o.ordered == millis_to_time(150));
  CHECK(o.finalized == millis_to_time(230));
  CHECK(o.block_no == 0);
  CHECK(o.tx_index == 0);
  CHECK(sim.state().get("counter")->value == "1");
  CHECK(sim.state().height() == 1);
  REQUIRE(sim.applied_log().size() == 1);
  CHECK(sim.applied_log()[0].function == "incr");
  CHECK(sim.applied_log()[0].version == Version{0, 0});
}

TEST_CASE("concurrent writers to one key: first commits, second conflicts") {
  Fixture f;
  LedgerSim sim = f.make(LedgerConfig{});
  sim.submit("a", "c1", "incr", {"counter"}, f.record());
  sim.submit("b", "c2", "incr", {"counter"}, f.record());
  f.clock.run();

  CHECK(f.outcomes["a"].status == TxStatus::Committed);
  CHECK(f.outcomes["b"].status == TxStatus::MvccConflict);
  CHECK(sim.state().get("counter")->value == "1");
  CHECK(sim.applied_log().size() == 1);
}

TEST_CASE("a conflicted transaction succeeds when resubmitted later") {
  Fixture f;
  LedgerSim sim = f.make(LedgerConfig{});
  sim.submit("a", "c1", "incr", {"counter"}, f.record());
  sim.submit("b", "c2", "incr", {"counter"}, [&](const TxOutcome& o) {
    f.outcomes[o.tx_id] = o;
    if (o.status == TxStatus::MvccConflict)
      sim.submit("b-retry", "c2", "incr", {"counter"}, f.record());
  });
  f.clock.run();
  CHECK(f.outcomes["b"].status == TxStatus::MvccConflict);
  CHECK(f.outcomes["b-retry"].status == TxStatus::Committed);
  CHECK(sim.state().get("counter")->value == "2");
}

TEST_CASE("block cutting by count groups simultaneous endorsements") {
  Fixture f;
  LedgerConfig cfg;
  cfg.block.max_tx = 2;
  LedgerSim sim = f.make(cfg);
  sim.submit("a", "c1", "incr", {"k1"}, f.record());
  sim.submit("b", "c2", "incr", {"k2"}, f.record());
  sim.submit("c", "c3", "incr", {"k3"}, f.record());
  f.clock.run();

  REQUIRE(sim.block_log().size() == 2);
  CHECK(sim.block_log()[0].cut_reason == BlockCutReason::MaxCount);
  CHECK(sim.block_log()[0].tx_ids.size() == 2);
  CHECK(sim.block_log()[1].cut_reason == BlockCutReason::Timeout);
  CHECK(sim.block_log()[1].tx_ids.size() == 1);
  CHECK(f.outcomes["c"].block_no == 1);
  // All three touch distinct keys; everything commits.
  for (const char* id : {"a", "b", "c"})
    CHECK(f.outcomes[id].status == TxStatus::Committed);
}

TEST_CASE("business rollback finishes at endorsement with no writes") {
  Fixture f;
  LedgerSim sim = f.make(LedgerConfig{});
  sim.submit("rb", "c1", "boom", {}, f.record());
  f.clock.run();
  CHECK(f.outcomes["rb"].status == TxStatus::BusinessRollback);
  CHECK(f.outcomes["rb"].payload == "deliberate");
  CHECK(f.outcomes["rb"].finalized == millis_to_time(50));
  CHECK(sim.state().get("should-not-persist") == nullptr);
  CHECK(sim.block_log().empty());
}

TEST_CASE("chaincode exceptions surface as errors with no writes") {
  Fixture f;
  LedgerSim sim = f.make(LedgerConfig{});
  sim.submit("err", "c1", "broken", {}, f.record());
  f.clock.run();
  CHECK(f.outcomes["err"].status == TxStatus::Error);
  CHECK(f.outcomes["err"].payload == "internal failure");
  CHECK(sim.state().get("should-not-persist") == nullptr);
}

TEST_CASE("unknown chaincode function is rejected at the API boundary") {
  Fixture f;
  LedgerSim sim = f.make(LedgerConfig{});
  sim.submit("u", "c1", "no-such-fn", {}, f.record());
  f.clock.run();
  CHECK(f.outcomes["u"].status == TxStatus::Error);
  CHECK(f.outcomes["u"].payload ==
        "unknown chaincode function: no-such-fn");
}

TEST_CASE("submissions after round close are dropped") {
  Fixture f;
  LedgerSim sim = f.make(LedgerConfig{});
  sim.set_accepting(false);
  sim.submit("late", "c1", "incr", {"k"}, f.record());
  f.clock.run();
  CHECK(f.outcomes["late"].status == TxStatus::Dropped);
  CHECK(sim.dropped_count() == 1);
}

TEST_CASE("endorsement timeout fires when latency exceeds the limit") {
  Fixture f;
  LedgerConfig cfg;
  cfg.latency.endorse_timeout = millis_to_time(10);  // below the 50ms base
  LedgerSim sim = f.make(cfg);
  sim.submit("slow", "c1", "incr", {"k"}, f.record());
  f.clock.run();
  CHECK(f.outcomes["slow"].status == TxStatus::EndorseTimeout);
  CHECK(f.outcomes["slow"].finalized == millis_to_time(10));
  CHECK(sim.state().get("k") == nullptr);
}

TEST_CASE("commit timeout classifies late but valid transactions") {
  Fixture f;
  LedgerConfig cfg;
  cfg.latency.commit_timeout = millis_to_time(100);  // end-to-end is 230ms
  LedgerSim sim = f.make(cfg);
  sim.submit("late", "c1", "incr", {"k"}, f.record());
  f.clock.run();
  CHECK(f.outcomes["late"].status == TxStatus::CommitTimeout);
  // The write still lands; only the client-visible outcome is late.
  CHECK(sim.state().get("k")->value == "1");
  CHECK(sim.applied_log().size() == 1);
}

TEST_CASE("commit pipeline is serialized across blocks") {
  Fixture f;
  LedgerConfig cfg;
  cfg.block.max_tx = 1;  // one block per transaction
  LedgerSim sim = f.make(cfg);
  sim.submit("a", "c1", "incr", {"k1"}, f.record());
  sim.submit("b", "c2", "incr", {"k2"}, f.record());
  f.clock.run();
  // Both blocks cut at 50ms; commits serialize: 130ms and 210ms.
  CHECK(f.outcomes["a"].finalized == millis_to_time(130));
  CHECK(f.outcomes["b"].finalized == millis_to_time(210));
  CHECK(f.outcomes["a"].block_no == 0);
  CHECK(f.outcomes["b"].block_no == 1);
  CHECK(sim.state().get("k2")->version == Version{1, 0});
}

TEST_CASE("applied log can be disabled for bulk rounds") {
  Fixture f;
  LedgerSim sim = f.make(LedgerConfig{});
  sim.set_keep_applied_log(false);
  sim.submit("a", "c1", "incr", {"k"}, f.record());
  f.clock.run();
  CHECK(f.outcomes["a"].status == TxStatus::Committed);
  CHECK(sim.applied_log().empty());
}

TEST_CASE("latency per committed tx decomposes monotonically") {
  Fixture f;
  LedgerConfig cfg;
  cfg.latency.kind = LatencyConfig::Kind::LoadExponential;
  LedgerSim sim = f.make(cfg);
  for (int i = 0; i < 40; ++i)
    sim.submit("t" + std::to_string(i), "c", "incr",
               {"k" + std::to_string(i)}, f.record());
  f.clock.run();
  for (const auto& [id, o] : f.outcomes) {
    if (o.status != TxStatus::Committed) continue;
    CHECK(o.submitted <= o.endorsed);
    CHECK(o.endorsed <= o.ordered);
    CHECK(o.ordered < o.finalized);
  }
}
