#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <thread>

#include "tpcc/registry.hpp"
#include "tpcc/wire.hpp"

using namespace tpcc;
using namespace tpcc::wire;

TEST_CASE("messages encode to one JSON line and round-trip") {
  Message m;
  m.type = "submit";
  m.round = 3;
  m.payload = {{"tx_id", "t0-1-0"}, {"n", 42}};
  const std::string line = encode_message(m);
  // Newline-framed: exactly one terminator, at the end.
  CHECK(line.find('\n') == line.size() - 1);
  const Message back = decode_message(line);
  CHECK(back.type == "submit");
  CHECK(back.round == 3);
  CHECK(back.payload.at("n") == 42);

  CHECK_THROWS_AS(decode_message("not json"), WireError);
  CHECK_THROWS_AS(decode_message("{\"round\":1}"), WireError);  // missing type
  CHECK_THROWS_AS(decode_message("{\"type\":\"x\"}"), WireError);
}

TEST_CASE("terminal requests and prepared state survive the wire") {
  TerminalRequest req;
  req.terminal_id = 4;
  req.seq = 17;
  req.retry_index = 2;
  req.profile = Profile::Payment;
  req.args = {"1", "2", "1", "2", "last", "BARBARBAR", "500"};
  req.created = 123;
  req.scheduled = 456;
  req.deferred = false;
  const TerminalRequest back = request_from_json(request_to_json(req));
  CHECK(back.terminal_id == 4);
  CHECK(back.seq == 17);
  CHECK(back.retry_index == 2);
  CHECK(back.profile == Profile::Payment);
  CHECK(back.args == req.args);
  CHECK(back.scheduled == 456);

  const PreparedState p = prepare_round(9, 2, 30, 3);
  const PreparedState pback = prepared_from_json(prepared_to_json(p));
  CHECK(pback.hash() == p.hash());
  CHECK(pback.terminal_ranges == p.terminal_ranges);
  CHECK(pback.constants.c_last == p.constants.c_last);
}

TEST_CASE("channels deliver newline-framed messages both ways") {
  Listener listener;
  std::unique_ptr<Channel> client;
  std::thread t([&] { client = connect_local(listener.port()); });
  std::unique_ptr<Channel> server = listener.accept();
  t.join();
  REQUIRE(client);

  Message m;
  m.type = "hello";
  m.payload = {{"worker", 0}};
  client->send(m);
  m.type = "ping";
  m.round = 7;
  client->send(m);

  Message got;
  REQUIRE(server->receive(got));
  CHECK(got.type == "hello");
  REQUIRE(server->receive(got));
  CHECK(got.type == "ping");
  CHECK(got.round == 7);

  m.type = "pong";
  server->send(m);
  REQUIRE(client->receive(got));
  CHECK(got.type == "pong");

  client->close();
  CHECK(!server->receive(got));  // orderly EOF
}

namespace {

// Operational micro-world: 1 warehouse, 10 districts, 100 customers each,
// full item/stock coverage so profiles mostly succeed.
WorldState distributed_world(const NurandConstants& nc) {
  WorldState world = load_world_direct(0, 21, nc);
  EndorsementContext ctx(world);
  Registry reg(ctx);
  Warehouse w;
  w.w_id = 1;
  w.name = "w";
  reg.create(w);
  for (std::int64_t d = 1; d <= 10; ++d) {
    District dd;
    dd.w_id = 1;
    dd.d_id = d;
    dd.next_o_id = 1;
    reg.create(dd);
    for (std::int64_t c = 1; c <= 100; ++c) {
      Customer cu;
      cu.w_id = 1;
      cu.d_id = d;
      cu.c_id = c;
      cu.last = syllable_last_name((c - 1) % 1000);
      cu.credit = "GC";
      reg.create(cu);
    }
  }
  for (std::int64_t i = 1; i <= kItemCount; ++i) {
    Stock st;
    st.w_id = 1;
    st.i_id = i;
    st.quantity = 500000;  // effectively never low
    for (auto& di : st.dist) di = "d";
    reg.create(st);
  }
  for (const auto& [key, value] : ctx.rw_set().writes)
    world.put(key, *value, Version{});
  world.freeze();
  return world;
}

}  // namespace

TEST_CASE("a two-worker distributed round commits work end to end") {
  const NurandConstants nc = NurandConstants::derive(21);
  WorldState world = distributed_world(nc);

  ManagerConfig cfg;
  cfg.prepared = prepare_round(21, 1, 6, 2);
  cfg.prepared.constants = nc;
  cfg.duration = seconds_to_time(3);
  cfg.timing = make_preset(TimingPresetKind::PaperCalibrated, 0.02);
  cfg.retry_cap = 5;

  LedgerConfig ledger;
  ledger.latency.endorse_base = millis_to_time(5);
  ledger.latency.commit_base = millis_to_time(8);
  ledger.block.block_time = millis_to_time(20);

  Listener listener;
  std::thread w0([&] {
    auto ch = connect_local(listener.port());
    run_worker(*ch, 0);
  });
  std::thread w1([&] {
    auto ch = connect_local(listener.port());
    run_worker(*ch, 1);
  });
  auto c0 = listener.accept();
  auto c1 = listener.accept();

  // Order the channels by the worker index in each hello.
  Message h0, h1;
  REQUIRE(c0->receive(h0));
  REQUIRE(c1->receive(h1));
  CHECK(h0.type == "hello");
  CHECK(h1.type == "hello");
  if (h0.payload.at("worker").get<int>() != 0) std::swap(c0, c1);

  const ExecutionResult res =
      run_manager(world.fork(), cfg, ledger, {c0.get(), c1.get()});
  w0.join();
  w1.join();

  CHECK(res.records.size() > 10);
  std::int64_t committed = 0;
  std::set<int> terminals;
  for (const auto& r : res.records) {
    terminals.insert(r.terminal_id);
    if (r.status == TxStatus::Committed) ++committed;
  }
  CHECK(committed > 0);
  // Both workers' terminal ranges produced traffic.
  CHECK(*terminals.begin() < 3);
  CHECK(*terminals.rbegin() >= 3);
  // Precision samples came back from the workers; wall-clock reserves are
  // bounded by the largest think time.
  CHECK(!res.precision.empty());
  const RunSummary s = summarize(res.records, res.duration, res.precision);
  CHECK(s.goodput_tps <= s.request_tps + 1e-9);
}
