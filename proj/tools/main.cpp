// tpccbench: TPC-C over a simulated execute-order-validate ledger.
//
//   tpccbench load   --warehouses 1 --seed 7 --out world.snap
//   tpccbench run    --config bench.conf --clock virtual --out results/
//   tpccbench sweep  --seed 7 --duration-s 600 --out sweep/
//   tpccbench report --in results/records.csv

#include <sys/wait.h>
#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "tpcc/config.hpp"
#include "tpcc/harness.hpp"
#include "tpcc/snapshot.hpp"
#include "tpcc/wire.hpp"

namespace {

using namespace tpcc;

struct CommonFlags {
  std::string config_path;
  std::string warehouses, terminals_per_warehouse, workers, seed, clock,
      block_time_ms, block_max_tx, block_max_bytes, duration_s,
      endorse_base_ms, commit_base_ms, endorse_timeout_ms, commit_timeout_ms,
      latency_model, latency_load_factor, timing_preset, timing_scale,
      retry_cap, retry_backoff_ms;
};

void add_common_flags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config_path, "key=value config file");
  cmd->add_option("--warehouses", f.warehouses);
  cmd->add_option("--terminals-per-warehouse", f.terminals_per_warehouse);
  cmd->add_option("--workers", f.workers);
  cmd->add_option("--seed", f.seed);
  cmd->add_option("--clock", f.clock)->check(CLI::IsMember({"virtual", "wall"}));
  cmd->add_option("--block-time-ms", f.block_time_ms);
  cmd->add_option("--block-max-tx", f.block_max_tx);
  cmd->add_option("--block-max-bytes", f.block_max_bytes);
  cmd->add_option("--duration-s", f.duration_s);
  cmd->add_option("--endorse-base-ms", f.endorse_base_ms);
  cmd->add_option("--commit-base-ms", f.commit_base_ms);
  cmd->add_option("--endorse-timeout-ms", f.endorse_timeout_ms);
  cmd->add_option("--commit-timeout-ms", f.commit_timeout_ms);
  cmd->add_option("--latency-model", f.latency_model);
  cmd->add_option("--latency-load-factor", f.latency_load_factor);
  cmd->add_option("--timing-preset", f.timing_preset);
  cmd->add_option("--timing-scale", f.timing_scale);
  cmd->add_option("--retry-cap", f.retry_cap);
  cmd->add_option("--retry-backoff-ms", f.retry_backoff_ms);
}

// Built-in defaults, then the config file, then explicit flags on top.
BenchConfig resolve_config(const CommonFlags& f, BenchConfig cfg = {}) {
  if (!f.config_path.empty()) cfg = load_config_file(f.config_path);
  auto apply = [&cfg](const char* key, const std::string& value) {
    if (!value.empty()) apply_config_entry(cfg, key, value);
  };
  apply("warehouses", f.warehouses);
  apply("terminals-per-warehouse", f.terminals_per_warehouse);
  apply("workers", f.workers);
  apply("seed", f.seed);
  apply("clock", f.clock);
  apply("block-time-ms", f.block_time_ms);
  apply("block-max-tx", f.block_max_tx);
  apply("block-max-bytes", f.block_max_bytes);
  apply("duration-s", f.duration_s);
  apply("endorse-base-ms", f.endorse_base_ms);
  apply("commit-base-ms", f.commit_base_ms);
  apply("endorse-timeout-ms", f.endorse_timeout_ms);
  apply("commit-timeout-ms", f.commit_timeout_ms);
  apply("latency-model", f.latency_model);
  apply("latency-load-factor", f.latency_load_factor);
  apply("timing-preset", f.timing_preset);
  apply("timing-scale", f.timing_scale);
  apply("retry-cap", f.retry_cap);
  apply("retry-backoff-ms", f.retry_backoff_ms);
  return cfg;
}

WorldState world_for_run(const BenchConfig& cfg,
                         const std::string& snapshot_path) {
  if (!snapshot_path.empty()) return load_snapshot_file(snapshot_path);
  std::cerr << "loading " << cfg.warehouses << " warehouse(s)...\n";
  return load_world(cfg.warehouses, cfg.seed,
                    NurandConstants::derive(cfg.seed));
}

void write_run_outputs(const std::filesystem::path& out_dir,
                       const ExecutionResult& result, bool dump_blocks,
                       bool gnuplot) {
  std::filesystem::create_directories(out_dir);
  {
    std::ofstream os(out_dir / "records.csv");
    write_csv(os, result.records);
  }
  const RunSummary summary =
      summarize(result.records, result.duration, result.precision);
  {
    std::ofstream os(out_dir / "summary.txt");
    write_summary(os, summary);
  }
  write_summary(std::cout, summary);
  if (dump_blocks) {
    std::ofstream os(out_dir / "blocks.txt");
    for (const auto& b : result.block_log) {
      os << "block " << b.block_no << " reason "
         << (b.cut_reason == BlockCutReason::Timeout    ? "timeout"
             : b.cut_reason == BlockCutReason::MaxCount ? "max-count"
                                                        : "max-bytes")
         << " cut_us " << b.cut_time << " txs " << b.tx_ids.size();
      for (const auto& id : b.tx_ids) os << ' ' << id;
      os << '\n';
    }
  }
  if (gnuplot && !result.precision.empty()) {
    std::ofstream os(out_dir / "precision.dat");
    os << "# t1_us t2_us d_us terminal\n";
    for (const auto& s : result.precision)
      os << s.pop_time << ' ' << s.scheduled_time << ' ' << s.d << ' '
         << s.terminal_id << '\n';
  }
}

int cmd_load(const CommonFlags& flags, const std::string& out) {
  const BenchConfig cfg = resolve_config(flags);
  LoadStats stats;
  WorldState state = load_world(cfg.warehouses, cfg.seed,
                                NurandConstants::derive(cfg.seed), &stats);
  std::cout << "entities " << stats.entities << "\nbatches " << stats.batches
            << "\nstate_hash " << stats.state_hash << "\ncontent_hash "
            << stats.content_hash << "\nentries " << state.size() << '\n';
  if (!out.empty()) {
    save_snapshot_file(out, state);
    std::cout << "snapshot " << out << '\n';
  }
  return 0;
}

int spawn_worker(const char* argv0, int port, int index) {
  const pid_t pid = fork();
  if (pid < 0) throw std::runtime_error("fork failed");
  if (pid == 0) {
    execl(argv0, argv0, "worker", "--port", std::to_string(port).c_str(),
          "--index", std::to_string(index).c_str(), (char*)nullptr);
    _exit(127);
  }
  return pid;
}

int cmd_run(const char* argv0, const CommonFlags& flags,
            const std::string& snapshot_path, const std::string& out,
            bool multiprocess, bool dump_blocks, bool gnuplot) {
  const BenchConfig cfg = resolve_config(flags);
  WorldState world = world_for_run(cfg, snapshot_path);

  ExecutionResult result;
  if (multiprocess) {
    if (cfg.clock_mode != ClockMode::Wall)
      throw std::runtime_error("--multiprocess requires --clock wall");
    wire::Listener listener;
    std::vector<int> pids;
    for (int i = 0; i < cfg.workers; ++i)
      pids.push_back(spawn_worker(argv0, listener.port(), i));
    std::vector<std::unique_ptr<wire::Channel>> owned(
        static_cast<std::size_t>(cfg.workers));
    for (int i = 0; i < cfg.workers; ++i) {
      auto channel = listener.accept();
      wire::Message hello;
      if (!channel->receive(hello) || hello.type != "hello")
        throw std::runtime_error("worker handshake failed");
      owned[hello.payload.at("worker").get<std::size_t>()] =
          std::move(channel);
    }
    std::vector<wire::Channel*> channels;
    for (auto& c : owned) channels.push_back(c.get());

    wire::ManagerConfig mc;
    mc.prepared = prepare_round(cfg.seed, cfg.warehouses,
                                cfg.terminal_count(), cfg.workers);
    mc.duration = seconds_to_time(cfg.duration_s);
    mc.timing = cfg.timing();
    mc.retry_cap = cfg.retry_cap;
    mc.retry_backoff = millis_to_time(cfg.retry_backoff_ms);
    result = wire::run_manager(std::move(world), mc, cfg.ledger, channels);
    for (int pid : pids) waitpid(pid, nullptr, 0);
  } else {
    ExecutionConfig ec;
    ec.warehouse_count = cfg.warehouses;
    ec.terminal_count = cfg.terminal_count();
    ec.worker_count = cfg.workers;
    ec.seed = cfg.seed;
    ec.clock_mode = cfg.clock_mode;
    ec.duration = seconds_to_time(cfg.duration_s);
    ec.timing = cfg.timing();
    ec.constants = NurandConstants::derive(cfg.seed);
    ec.retry_cap = cfg.retry_cap;
    ec.retry_backoff = millis_to_time(cfg.retry_backoff_ms);
    result = run_execution(std::move(world), ec, cfg.ledger);
  }

  write_run_outputs(out.empty() ? "." : out, result, dump_blocks, gnuplot);
  return 0;
}

int cmd_sweep(const CommonFlags& flags, const std::string& out) {
  // The sweep reproduces the error profile, so it defaults to the
  // calibrated load-dependent latency model.
  BenchConfig defaults;
  defaults.ledger = calibrated_ledger_config();
  BenchConfig cfg = resolve_config(flags, defaults);
  std::filesystem::path out_dir = out.empty() ? "." : out;
  std::filesystem::create_directories(out_dir);

  WorldState world =
      load_world(cfg.warehouses, cfg.seed, NurandConstants::derive(cfg.seed));

  std::vector<SweepRow> rows;
  std::vector<std::pair<int, double>> rates;
  for (int terminals : sweep_terminal_grid()) {
    ExecutionConfig ec;
    ec.warehouse_count = cfg.warehouses;
    ec.terminal_count = terminals;
    ec.worker_count = cfg.workers;
    ec.seed = cfg.seed;
    ec.clock_mode = ClockMode::Virtual;
    ec.duration = seconds_to_time(cfg.duration_s);
    ec.timing = cfg.timing();
    ec.constants = NurandConstants::derive(cfg.seed);
    ec.retry_cap = cfg.retry_cap;
    ec.retry_backoff = millis_to_time(cfg.retry_backoff_ms);
    ExecutionResult result = run_execution(world.fork(), ec, cfg.ledger);
    const RunSummary s = summarize(result.records, result.duration, {});
    SweepRow row;
    row.terminals = terminals;
    row.fractions = s.status_fractions;
    row.goodput_tps = s.goodput_tps;
    row.request_tps = s.request_tps;
    rows.push_back(row);
    rates.emplace_back(terminals, s.request_tps);
    std::cerr << "terminals " << terminals << " request_tps "
              << s.request_tps << " goodput_tps " << s.goodput_tps << '\n';
  }

  {
    std::ofstream os(out_dir / "error_profile.txt");
    write_error_profile_table(os, rows);
  }
  {
    std::ofstream os(out_dir / "errors.dat");
    write_errors_dat(os, rows);
  }
  {
    std::ofstream os(out_dir / "rate.dat");
    write_rate_dat(os, rates);
  }
  write_error_profile_table(std::cout, rows);
  return 0;
}

int cmd_report(const std::string& in, const std::string& duration_s) {
  std::ifstream is(in);
  if (!is) throw std::runtime_error("cannot open " + in);
  const auto records = read_csv(is);
  Time duration = 0;
  for (const auto& r : records)
    duration = std::max(duration, r.finalized);
  if (!duration_s.empty())
    duration = seconds_to_time(std::stod(duration_s));
  write_summary(std::cout, summarize(records, duration, {}));
  return 0;
}

int cmd_worker(int port, int index) {
  auto channel = wire::connect_local(port);
  wire::run_worker(*channel, index);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"TPC-C workload on a simulated execute-order-validate ledger"};
  app.require_subcommand(1);

  CommonFlags load_flags, run_flags, sweep_flags;
  std::string load_out, run_out, sweep_out, run_snapshot, report_in,
      report_duration;
  bool multiprocess = false, dump_blocks = false, gnuplot = false;
  int worker_port = 0, worker_index = 0;

  auto* load = app.add_subcommand("load", "generate and load the population");
  add_common_flags(load, load_flags);
  load->add_option("--out", load_out, "snapshot output path");

  auto* run = app.add_subcommand("run", "one closed-loop execution round");
  add_common_flags(run, run_flags);
  run->add_option("--snapshot", run_snapshot, "start from a saved snapshot");
  run->add_option("--out", run_out, "output directory");
  run->add_flag("--multiprocess", multiprocess,
                "spawn one worker process per worker");
  run->add_flag("--dump-blocks", dump_blocks, "write the block log");
  run->add_flag("--gnuplot", gnuplot, "write gnuplot .dat files");

  auto* sweep =
      app.add_subcommand("sweep", "error profile across the terminal grid");
  add_common_flags(sweep, sweep_flags);
  sweep->add_option("--out", sweep_out, "output directory");

  auto* report = app.add_subcommand("report", "summarize a records CSV");
  report->add_option("--in", report_in, "records.csv path")->required();
  report->add_option("--duration-s", report_duration,
                     "round duration override");

  auto* worker = app.add_subcommand("worker");
  worker->add_option("--port", worker_port)->required();
  worker->add_option("--index", worker_index)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (load->parsed()) return cmd_load(load_flags, load_out);
    if (run->parsed())
      return cmd_run(argv[0], run_flags, run_snapshot, run_out, multiprocess,
                     dump_blocks, gnuplot);
    if (sweep->parsed()) return cmd_sweep(sweep_flags, sweep_out);
    if (report->parsed()) return cmd_report(report_in, report_duration);
    if (worker->parsed()) return cmd_worker(worker_port, worker_index);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
