#include "tpcc/harness.hpp"

#include <functional>
#include <memory>
#include <stdexcept>

#include "tpcc/keys.hpp"
#include "tpcc/multiplexer.hpp"
#include "tpcc/profiles.hpp"

namespace tpcc {

std::vector<std::pair<int, int>> partition_evenly(int total, int workers) {
  if (workers <= 0) throw std::invalid_argument("workers must be positive");
  std::vector<std::pair<int, int>> ranges;
  ranges.reserve(static_cast<std::size_t>(workers));
  const int base = total / workers;
  const int rem = total % workers;
  int begin = 0;
  for (int w = 0; w < workers; ++w) {
    const int size = base + (w < rem ? 1 : 0);
    ranges.emplace_back(begin, begin + size);
    begin += size;
  }
  return ranges;
}

namespace {
constexpr std::uint64_t kFnvOffset = 14695981039346656037ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

void fnv_u64(std::uint64_t& h, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    h ^= v & 0xff;
    h *= kFnvPrime;
    v >>= 8;
  }
}
}  // namespace

std::uint64_t PreparedState::hash() const {
  std::uint64_t h = kFnvOffset;
  fnv_u64(h, seed);
  fnv_u64(h, static_cast<std::uint64_t>(warehouse_count));
  fnv_u64(h, static_cast<std::uint64_t>(terminal_count));
  fnv_u64(h, static_cast<std::uint64_t>(worker_count));
  fnv_u64(h, static_cast<std::uint64_t>(constants.c_last));
  fnv_u64(h, static_cast<std::uint64_t>(constants.c_id));
  fnv_u64(h, static_cast<std::uint64_t>(constants.ol_i));
  for (const auto& [begin, end] : terminal_ranges) {
    fnv_u64(h, static_cast<std::uint64_t>(begin));
    fnv_u64(h, static_cast<std::uint64_t>(end));
  }
  return h;
}

PreparedState prepare_round(std::uint64_t seed, int warehouse_count,
                            int terminal_count, int worker_count) {
  PreparedState p;
  p.seed = seed;
  p.warehouse_count = warehouse_count;
  p.terminal_count = terminal_count;
  p.worker_count = worker_count;
  p.constants = NurandConstants::derive(seed);
  p.terminal_ranges = partition_evenly(terminal_count, worker_count);
  return p;
}

const char* profile_function(Profile p) {
  switch (p) {
    case Profile::NewOrder: return "NEW_ORDER";
    case Profile::Payment: return "PAYMENT";
    case Profile::OrderStatus: return "ORDER_STATUS";
    case Profile::Delivery: return "DELIVERY";
    case Profile::StockLevel: return "STOCK_LEVEL";
  }
  return "NEW_ORDER";
}

std::string request_tx_id(int terminal_id, std::int64_t seq,
                          int retry_index) {
  return "t" + std::to_string(terminal_id) + "-" + std::to_string(seq) +
         "-" + std::to_string(retry_index);
}

std::int64_t terminal_home_w(int terminal_id, int warehouse_count) {
  return terminal_id % warehouse_count + 1;
}

std::int64_t terminal_home_d(int terminal_id, int warehouse_count) {
  return terminal_id / warehouse_count % kDistrictsPerWarehouse + 1;
}

// ---------------------------------------------------------------------------
// Load round

namespace {

// Chunks the generated population into LOAD_BATCH argument records.
std::vector<std::vector<std::string>> build_load_batches(
    int warehouse_count, std::uint64_t seed, const NurandConstants& constants,
    int batch_size, std::int64_t* entity_count) {
  std::vector<std::vector<std::string>> batches;
  std::vector<std::string> current;
  std::int64_t entities = 0;

  auto flush = [&] {
    if (current.empty()) return;
    std::vector<std::string> args;
    args.reserve(current.size() + 3);
    args.push_back(std::to_string(current.size()));
    for (auto& e : current) args.push_back(std::move(e));
    args.push_back("0");       // load timestamp
    args.push_back("loader");  // client id
    batches.push_back(std::move(args));
    current.clear();
  };

  generate_initial_population(
      warehouse_count, seed, constants,
      [&](EntityType type, const std::string& record) {
        ++entities;
        current.push_back(encode_load_entity(type, record));
        if (current.size() >= static_cast<std::size_t>(batch_size)) flush();
      });
  flush();

  if (entity_count) *entity_count = entities;
  return batches;
}

}  // namespace

WorldState load_world(int warehouse_count, std::uint64_t seed,
                      const NurandConstants& constants, LoadStats* stats,
                      int batch_size) {
  if (batch_size <= 0) throw std::invalid_argument("batch_size must be > 0");

  std::int64_t entities = 0;
  auto batches = build_load_batches(warehouse_count, seed, constants,
                                    batch_size, &entities);

  SimClock clock(ClockMode::Virtual);
  LedgerSim sim(clock, WorldState(), LedgerConfig{},
                Rng(seed).derive(0x10adull).next_u64());
  sim.set_keep_applied_log(false);
  register_tpcc_chaincode(sim);

  // Batches touch disjoint keys, so a submission window just bounds the
  // orderer backlog; no conflicts are possible.
  std::int64_t committed = 0;
  std::size_t next = 0;
  std::function<void()> submit_one = [&] {
    if (next >= batches.size()) return;
    const std::size_t idx = next++;
    sim.submit("load-" + std::to_string(idx), "loader", "LOAD_BATCH",
               std::move(batches[idx]), [&](const TxOutcome& outcome) {
                 if (outcome.status != TxStatus::Committed)
                   throw std::runtime_error(
                       std::string("load batch failed: ") +
                       tx_status_name(outcome.status) + " " + outcome.payload);
                 ++committed;
                 submit_one();
               });
  };
  for (std::size_t i = 0; i < 64 && i < batches.size(); ++i) submit_one();
  clock.run();

  if (committed != static_cast<std::int64_t>(batches.size()))
    throw std::runtime_error("load incomplete");

  sim.state().freeze();
  WorldState out = sim.state().fork();
  if (stats) {
    stats->entities = entities;
    stats->batches = static_cast<std::int64_t>(batches.size());
    stats->committed_batches = committed;
    stats->state_hash = out.state_hash();
    stats->content_hash = out.content_hash();
  }
  return out;
}

WorldState load_world_direct(int warehouse_count, std::uint64_t seed,
                             const NurandConstants& constants) {
  WorldState state;
  std::vector<std::string> chunk;

  auto flush = [&] {
    if (chunk.empty()) return;
    std::vector<std::string> args;
    args.reserve(chunk.size() + 3);
    args.push_back(std::to_string(chunk.size()));
    for (auto& e : chunk) args.push_back(std::move(e));
    args.push_back("0");
    args.push_back("loader");
    EndorsementContext ctx(state);
    do_load_batch(ctx, args);
    for (const auto& [key, value] : ctx.rw_set().writes) {
      if (value)
        state.put(key, *value, Version{});
      else
        state.del(key);
    }
    chunk.clear();
  };

  generate_initial_population(
      warehouse_count, seed, constants,
      [&](EntityType type, const std::string& record) {
        chunk.push_back(encode_load_entity(type, record));
        if (chunk.size() >= 1000) flush();
      });
  flush();

  state.freeze();
  return state;
}

std::int64_t count_primary_entries(const WorldState& state) {
  std::int64_t count = 0;
  state.for_each([&](const std::string& key, const VersionedValue&) {
    const std::size_t sep = key.find(kKeySeparator);
    if (sep == std::string::npos) return;
    if (key.compare(0, sep, keys::kCustomerLastName) != 0) ++count;
  });
  return count;
}

// ---------------------------------------------------------------------------
// Execution round

ExecutionResult run_execution(WorldState initial, const ExecutionConfig& cfg,
                              const LedgerConfig& ledger) {
  if (cfg.terminal_count <= 0)
    throw std::invalid_argument("terminal_count must be positive");
  if (cfg.warehouse_count <= 0)
    throw std::invalid_argument("warehouse_count must be positive");

  ExecutionResult result;
  result.duration = cfg.duration;

  SimClock clock(cfg.clock_mode);
  Rng root(cfg.seed);
  LedgerSim sim(clock, std::move(initial), ledger,
                root.derive(0x5edull).next_u64());
  sim.set_keep_applied_log(cfg.keep_applied_log);
  register_tpcc_chaincode(sim);

  const auto ranges = partition_evenly(cfg.terminal_count, cfg.worker_count);

  std::vector<std::unique_ptr<Terminal>> terminals(
      static_cast<std::size_t>(cfg.terminal_count));
  std::vector<std::unique_ptr<Multiplexer>> muxes;

  auto dispatch = [&](int worker, const TerminalRequest& req) {
    MetricsRecord rec;
    rec.profile = req.profile;
    rec.terminal_id = req.terminal_id;
    rec.seq = req.seq;
    rec.retry_index = req.retry_index;
    rec.worker_id = worker;
    rec.deferred = req.deferred;
    rec.created = req.created;
    rec.tx_id = request_tx_id(req.terminal_id, req.seq, req.retry_index);
    const std::string client = "t" + std::to_string(req.terminal_id);

    std::vector<std::string> args = req.args;
    args.push_back(std::to_string(clock.now()));
    args.push_back(client);

    sim.submit(rec.tx_id, client, profile_function(req.profile),
               std::move(args),
               [&terminals, &result, req, rec](const TxOutcome& o) mutable {
                 rec.status = o.status;
                 rec.submitted = o.submitted;
                 rec.endorsed = o.endorsed;
                 rec.ordered = o.ordered;
                 rec.finalized = o.finalized;
                 rec.stats = o.stats;
                 rec.block_no = o.block_no;
                 rec.tx_index = o.tx_index;
                 Terminal& term =
                     *terminals[static_cast<std::size_t>(req.terminal_id)];
                 const bool retried = term.on_response(req, o.status);
                 rec.abandoned =
                     o.status == TxStatus::MvccConflict && !retried;
                 result.records.push_back(std::move(rec));
               });
  };

  for (int w = 0; w < cfg.worker_count; ++w) {
    muxes.push_back(std::make_unique<Multiplexer>(
        clock, [&dispatch, w](const TerminalRequest& req) {
          dispatch(w, req);
        }));
  }

  for (int w = 0; w < cfg.worker_count; ++w) {
    for (int t = ranges[static_cast<std::size_t>(w)].first;
         t < ranges[static_cast<std::size_t>(w)].second; ++t) {
      TerminalConfig tc;
      tc.terminal_id = t;
      tc.home_w = terminal_home_w(t, cfg.warehouse_count);
      tc.home_d = terminal_home_d(t, cfg.warehouse_count);
      tc.warehouse_count = cfg.warehouse_count;
      tc.constants = cfg.constants;
      tc.timing = cfg.timing;
      tc.retry_cap = cfg.retry_cap;
      tc.retry_backoff = cfg.retry_backoff;
      Multiplexer* mux = muxes[static_cast<std::size_t>(w)].get();
      terminals[static_cast<std::size_t>(t)] = std::make_unique<Terminal>(
          clock, tc, root.derive(1000 + static_cast<std::uint64_t>(t)).next_u64(),
          [mux](TerminalRequest req) { mux->push(std::move(req)); });
    }
  }

  // Staggered starts keep the opening submissions from arriving in one wave:
  // spread over a full mean request cycle.
  Rng stagger = root.derive(0x57a6);
  const Time spread = std::max(preset_mean_cycle(cfg.timing), millis_to_time(1));
  for (auto& term : terminals)
    term->start(stagger.uniform(0, spread));

  clock.schedule_at(cfg.duration, [&] {
    for (auto& term : terminals) term->stop();
    sim.set_accepting(false);
  });

  clock.run();

  for (const auto& mux : muxes) {
    const auto& s = mux->samples();
    result.precision.insert(result.precision.end(), s.begin(), s.end());
  }
  result.applied_log = sim.applied_log();
  result.block_log = sim.block_log();
  result.dropped = sim.dropped_count();
  sim.state().freeze();
  result.state_hash = sim.state().state_hash();
  result.content_hash = sim.state().content_hash();
  return result;
}

// ---------------------------------------------------------------------------
// Replay oracle

namespace {
struct FnTable {
  std::map<std::string, ChaincodeFn> fns;
  void register_chaincode(std::string name, ChaincodeFn fn) {
    fns.emplace(std::move(name), std::move(fn));
  }
};
}  // namespace

std::uint64_t replay_state_hash(const WorldState& initial,
                                const std::vector<AppliedTx>& log) {
  FnTable table;
  register_tpcc_chaincode(table);

  WorldState state = initial.fork();
  for (const auto& tx : log) {
    const auto it = table.fns.find(tx.function);
    if (it == table.fns.end())
      throw std::runtime_error("replay: unknown function " + tx.function);
    EndorsementContext ctx(state);
    const ChaincodeResult res = it->second(ctx, tx.args);
    if (res.outcome != ChaincodeOutcome::Ok)
      throw std::runtime_error("replay diverged at " + tx.tx_id + ": " +
                               res.payload);
    for (const auto& [key, value] : ctx.rw_set().writes) {
      if (value)
        state.put(key, *value, tx.version);
      else
        state.del(key);
    }
  }
  return state.state_hash();
}

}  // namespace tpcc
