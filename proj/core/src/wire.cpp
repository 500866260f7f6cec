#include "tpcc/wire.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <cstring>
#include <thread>

#include "tpcc/profiles.hpp"
#include "tpcc/terminal.hpp"

namespace tpcc::wire {

using nlohmann::json;

std::string encode_message(const Message& m) {
  json j;
  j["type"] = m.type;
  j["round"] = m.round;
  j["payload"] = m.payload;
  return j.dump() + "\n";
}

Message decode_message(const std::string& line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    throw WireError(std::string("malformed message: ") + e.what());
  }
  if (!j.is_object() || !j.contains("type") || !j.contains("round") ||
      !j.contains("payload"))
    throw WireError("message missing type/round/payload: " + line);
  Message m;
  m.type = j.at("type").get<std::string>();
  m.round = j.at("round").get<std::int64_t>();
  m.payload = j.at("payload");
  return m;
}

json request_to_json(const TerminalRequest& req) {
  json j;
  j["terminal"] = req.terminal_id;
  j["seq"] = req.seq;
  j["retry"] = req.retry_index;
  j["profile"] = profile_name(req.profile);
  j["args"] = req.args;
  j["created"] = req.created;
  j["scheduled"] = req.scheduled;
  j["deferred"] = req.deferred;
  return j;
}

TerminalRequest request_from_json(const json& j) {
  TerminalRequest req;
  req.terminal_id = j.at("terminal").get<int>();
  req.seq = j.at("seq").get<std::int64_t>();
  req.retry_index = j.at("retry").get<int>();
  const auto profile = profile_from_name(j.at("profile").get<std::string>());
  if (!profile) throw WireError("unknown profile in request");
  req.profile = *profile;
  req.args = j.at("args").get<std::vector<std::string>>();
  req.created = j.at("created").get<Time>();
  req.scheduled = j.at("scheduled").get<Time>();
  req.deferred = j.at("deferred").get<bool>();
  return req;
}

json prepared_to_json(const PreparedState& p) {
  json j;
  j["seed"] = p.seed;
  j["warehouses"] = p.warehouse_count;
  j["terminals"] = p.terminal_count;
  j["workers"] = p.worker_count;
  j["c_last"] = p.constants.c_last;
  j["c_id"] = p.constants.c_id;
  j["ol_i"] = p.constants.ol_i;
  json ranges = json::array();
  for (const auto& [begin, end] : p.terminal_ranges)
    ranges.push_back({begin, end});
  j["ranges"] = std::move(ranges);
  return j;
}

PreparedState prepared_from_json(const json& j) {
  PreparedState p;
  p.seed = j.at("seed").get<std::uint64_t>();
  p.warehouse_count = j.at("warehouses").get<int>();
  p.terminal_count = j.at("terminals").get<int>();
  p.worker_count = j.at("workers").get<int>();
  p.constants.c_last = j.at("c_last").get<std::int64_t>();
  p.constants.c_id = j.at("c_id").get<std::int64_t>();
  p.constants.ol_i = j.at("ol_i").get<std::int64_t>();
  for (const auto& r : j.at("ranges"))
    p.terminal_ranges.emplace_back(r.at(0).get<int>(), r.at(1).get<int>());
  return p;
}

// ---------------------------------------------------------------------------
// Transport

Channel::~Channel() { close(); }

void Channel::close() {
  if (fd_ >= 0) {
    ::shutdown(fd_, SHUT_RDWR);
    ::close(fd_);
    fd_ = -1;
  }
}

void Channel::send(const Message& m) {
  const std::string line = encode_message(m);
  std::lock_guard lock(send_mutex_);
  std::size_t sent = 0;
  while (sent < line.size()) {
    const ssize_t n =
        ::send(fd_, line.data() + sent, line.size() - sent, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw WireError(std::string("send failed: ") + std::strerror(errno));
    }
    sent += static_cast<std::size_t>(n);
  }
}

bool Channel::receive(Message& out) {
  for (;;) {
    const auto nl = buffer_.find('\n');
    if (nl != std::string::npos) {
      const std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      if (line.empty()) continue;
      out = decode_message(line);
      return true;
    }
    char chunk[4096];
    const ssize_t n = ::recv(fd_, chunk, sizeof chunk, 0);
    if (n == 0) return false;
    if (n < 0) {
      if (errno == EINTR) continue;
      if (errno == EBADF || errno == ECONNRESET) return false;
      throw WireError(std::string("recv failed: ") + std::strerror(errno));
    }
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

Listener::Listener() {
  fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd_ < 0) throw WireError("socket() failed");
  int one = 1;
  ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = 0;
  if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0)
    throw WireError(std::string("bind failed: ") + std::strerror(errno));
  if (::listen(fd_, 16) < 0)
    throw WireError(std::string("listen failed: ") + std::strerror(errno));
  socklen_t len = sizeof addr;
  if (::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len) < 0)
    throw WireError("getsockname failed");
  port_ = ntohs(addr.sin_port);
}

Listener::~Listener() {
  if (fd_ >= 0) ::close(fd_);
}

std::unique_ptr<Channel> Listener::accept() {
  for (;;) {
    const int fd = ::accept(fd_, nullptr, nullptr);
    if (fd >= 0) return std::make_unique<Channel>(fd);
    if (errno == EINTR) continue;
    throw WireError(std::string("accept failed: ") + std::strerror(errno));
  }
}

std::unique_ptr<Channel> connect_local(int port) {
  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) throw WireError("socket() failed");
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = htons(static_cast<std::uint16_t>(port));
  if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0) {
    ::close(fd);
    throw WireError(std::string("connect failed: ") + std::strerror(errno));
  }
  return std::make_unique<Channel>(fd);
}

// ---------------------------------------------------------------------------
// Manager

ExecutionResult run_manager(WorldState initial, const ManagerConfig& cfg,
                            const LedgerConfig& ledger,
                            std::vector<Channel*> workers) {
  const auto& prep = cfg.prepared;
  if (static_cast<int>(workers.size()) != prep.worker_count)
    throw WireError("worker channel count does not match the prepared state");

  ExecutionResult result;
  result.duration = cfg.duration;

  SimClock clock(ClockMode::Wall);
  LedgerSim sim(clock, std::move(initial), ledger,
                Rng(prep.seed).derive(0x5edull).next_u64());
  register_tpcc_chaincode(sim);

  // Handshake: prepare carries everything a worker needs for its share.
  for (int i = 0; i < prep.worker_count; ++i) {
    json payload = prepared_to_json(prep);
    payload["worker"] = i;
    payload["duration_us"] = cfg.duration;
    payload["retry_cap"] = cfg.retry_cap;
    payload["retry_backoff_us"] = cfg.retry_backoff;
    payload["menu_s"] = cfg.timing.menu_s;
    payload["keying_s"] = cfg.timing.keying_s;
    payload["think_mean_s"] = cfg.timing.think_mean_s;
    workers[static_cast<std::size_t>(i)]->send({"prepare", 1, payload});
  }
  for (int i = 0; i < prep.worker_count; ++i) {
    Message ack;
    if (!workers[static_cast<std::size_t>(i)]->receive(ack) ||
        ack.type != "prepare_ack")
      throw WireError("expected prepare_ack");
    if (ack.payload.at("hash").get<std::uint64_t>() != prep.hash())
      throw WireError("worker round-state hash mismatch");
  }

  std::atomic<int> finished{0};
  std::atomic<std::int64_t> outstanding{0};
  std::mutex precision_mutex;

  auto handle_submit = [&](int worker, TerminalRequest req) {
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

    Channel* channel = workers[static_cast<std::size_t>(worker)];
    sim.submit(rec.tx_id, client, profile_function(req.profile),
               std::move(args),
               [&result, &outstanding, &cfg, channel, req,
                rec](const TxOutcome& o) mutable {
                 rec.status = o.status;
                 rec.submitted = o.submitted;
                 rec.endorsed = o.endorsed;
                 rec.ordered = o.ordered;
                 rec.finalized = o.finalized;
                 rec.stats = o.stats;
                 rec.block_no = o.block_no;
                 rec.tx_index = o.tx_index;
                 rec.abandoned = o.status == TxStatus::MvccConflict &&
                                 req.retry_index >= cfg.retry_cap;
                 result.records.push_back(std::move(rec));
                 json payload;
                 payload["tx_id"] = o.tx_id;
                 payload["status"] = tx_status_name(o.status);
                 channel->send({"response", 1, payload});
                 --outstanding;
               });
  };

  std::vector<std::thread> readers;
  for (int i = 0; i < prep.worker_count; ++i) {
    readers.emplace_back([&, i] {
      Channel* channel = workers[static_cast<std::size_t>(i)];
      Message m;
      while (channel->receive(m)) {
        if (m.type == "submit") {
          TerminalRequest req = request_from_json(m.payload);
          ++outstanding;
          clock.post(0, [&handle_submit, i, req = std::move(req)]() mutable {
            handle_submit(i, std::move(req));
          });
        } else if (m.type == "finished") {
          std::vector<PrecisionSample> samples;
          for (const auto& s : m.payload.at("samples")) {
            PrecisionSample ps;
            ps.pop_time = s.at(0).get<Time>();
            ps.scheduled_time = s.at(1).get<Time>();
            ps.d = s.at(2).get<Time>();
            ps.terminal_id = s.at(3).get<int>();
            samples.push_back(ps);
          }
          {
            std::lock_guard lock(precision_mutex);
            result.precision.insert(result.precision.end(), samples.begin(),
                                    samples.end());
          }
          ++finished;
          clock.post(0, [] {});  // wake the loop to re-check the end state
        }
      }
    });
  }

  bool closed = false;
  std::function<void()> tick = [&] {
    if (closed) return;
    if (clock.now() >= cfg.duration) sim.set_accepting(false);
    if (finished.load() == prep.worker_count && outstanding.load() == 0) {
      for (Channel* channel : workers) channel->send({"shutdown", 1, {}});
      closed = true;
      clock.stop();
      return;
    }
    clock.schedule_in(millis_to_time(20), tick);
  };
  clock.schedule_at(0, tick);

  for (Channel* channel : workers) channel->send({"start", 1, {}});
  clock.run();

  for (Channel* channel : workers) channel->close();
  for (auto& t : readers) t.join();

  result.applied_log = sim.applied_log();
  result.block_log = sim.block_log();
  result.dropped = sim.dropped_count();
  sim.state().freeze();
  result.state_hash = sim.state().state_hash();
  result.content_hash = sim.state().content_hash();
  return result;
}

// ---------------------------------------------------------------------------
// Worker

void run_worker(Channel& channel, int worker_index) {
  channel.send({"hello", 0, {{"worker", worker_index}}});

  Message m;
  if (!channel.receive(m) || m.type != "prepare")
    throw WireError("expected prepare");
  const PreparedState prep = prepared_from_json(m.payload);
  const int wi = m.payload.at("worker").get<int>();
  const Time duration = m.payload.at("duration_us").get<Time>();
  const int retry_cap = m.payload.at("retry_cap").get<int>();
  const Time retry_backoff = m.payload.at("retry_backoff_us").get<Time>();
  TimingPreset timing;
  timing.menu_s = m.payload.at("menu_s").get<double>();
  timing.keying_s = m.payload.at("keying_s").get<std::array<double, 5>>();
  timing.think_mean_s =
      m.payload.at("think_mean_s").get<std::array<double, 5>>();

  channel.send({"prepare_ack", 0, {{"hash", prep.hash()}}});
  if (!channel.receive(m) || m.type != "start")
    throw WireError("expected start");

  SimClock clock(ClockMode::Wall);
  Rng root(prep.seed);

  std::map<std::string, TerminalRequest> in_flight;
  std::int64_t outstanding = 0;  // clock-thread state
  bool finished_sent = false;
  bool stopped = false;

  Multiplexer mux(clock, [&](const TerminalRequest& req) {
    in_flight[request_tx_id(req.terminal_id, req.seq, req.retry_index)] = req;
    ++outstanding;
    channel.send({"submit", 1, request_to_json(req)});
  });

  const auto range = prep.terminal_ranges[static_cast<std::size_t>(wi)];
  std::vector<std::unique_ptr<Terminal>> terminals;
  for (int t = range.first; t < range.second; ++t) {
    TerminalConfig tc;
    tc.terminal_id = t;
    tc.home_w = terminal_home_w(t, prep.warehouse_count);
    tc.home_d = terminal_home_d(t, prep.warehouse_count);
    tc.warehouse_count = prep.warehouse_count;
    tc.constants = prep.constants;
    tc.timing = timing;
    tc.retry_cap = retry_cap;
    tc.retry_backoff = retry_backoff;
    terminals.push_back(std::make_unique<Terminal>(
        clock, tc, root.derive(1000 + static_cast<std::uint64_t>(t)).next_u64(),
        [&mux](TerminalRequest req) { mux.push(std::move(req)); }));
  }

  auto handle_response = [&](const json& payload) {
    const std::string tx_id = payload.at("tx_id").get<std::string>();
    const std::string status_name = payload.at("status").get<std::string>();
    TxStatus status = TxStatus::Error;
    for (TxStatus s :
         {TxStatus::Committed, TxStatus::BusinessRollback,
          TxStatus::MvccConflict, TxStatus::EndorseTimeout,
          TxStatus::CommitTimeout, TxStatus::Error, TxStatus::Dropped}) {
      if (status_name == tx_status_name(s)) status = s;
    }
    const auto it = in_flight.find(tx_id);
    if (it == in_flight.end()) return;
    const TerminalRequest req = it->second;
    in_flight.erase(it);
    --outstanding;
    const std::size_t idx =
        static_cast<std::size_t>(req.terminal_id - range.first);
    terminals[idx]->on_response(req, status);
  };

  std::thread reader([&] {
    Message r;
    while (channel.receive(r)) {
      if (r.type == "response") {
        clock.post(0, [&handle_response, payload = r.payload] {
          handle_response(payload);
        });
      } else if (r.type == "shutdown") {
        clock.post(0, [&] {
          stopped = true;
          clock.stop();
        });
        break;
      }
    }
  });

  Rng stagger = root.derive(0x57a6u + static_cast<std::uint64_t>(wi));
  const Time spread = std::max(preset_mean_cycle(timing), millis_to_time(1));
  for (auto& term : terminals) term->start(stagger.uniform(0, spread));

  clock.schedule_at(duration, [&] {
    for (auto& term : terminals) term->stop();
  });

  std::function<void()> tick = [&] {
    if (stopped) return;
    if (!finished_sent && clock.now() >= duration && outstanding == 0 &&
        mux.queue_length() == 0) {
      json samples = json::array();
      for (const auto& s : mux.samples())
        samples.push_back(
            {s.pop_time, s.scheduled_time, s.d, s.terminal_id});
      channel.send({"finished", 1, {{"samples", std::move(samples)}}});
      finished_sent = true;
    }
    clock.schedule_in(millis_to_time(20), tick);
  };
  clock.schedule_at(0, tick);

  clock.run();
  channel.close();
  reader.join();
}

}  // namespace tpcc::wire
