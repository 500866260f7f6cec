#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "tpcc/harness.hpp"
#include "tpcc/multiplexer.hpp"

namespace tpcc::wire {

class WireError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One protocol message, sent as a single JSON line.
struct Message {
  std::string type;
  std::int64_t round = 0;
  nlohmann::json payload;
};

// Types used by the manager/worker protocol, in rough order of appearance:
//   hello        worker -> manager   {worker}
//   prepare      manager -> worker   round agreement + timing + duration
//   prepare_ack  worker -> manager   {hash} over the prepared state
//   start        manager -> worker   {}
//   submit       worker -> manager   one terminal request
//   response     manager -> worker   final status of a submission
//   finished     worker -> manager   {samples: [...]} scheduling precision
//   shutdown     manager -> worker   {}

std::string encode_message(const Message& m);
Message decode_message(const std::string& line);

nlohmann::json request_to_json(const TerminalRequest& req);
TerminalRequest request_from_json(const nlohmann::json& j);

nlohmann::json prepared_to_json(const PreparedState& p);
PreparedState prepared_from_json(const nlohmann::json& j);

// ---------------------------------------------------------------------------
// Local socket transport

// Connected stream socket carrying newline-delimited messages. send() is
// thread-safe; receive() expects a single reader.
class Channel {
 public:
  explicit Channel(int fd) : fd_(fd) {}
  ~Channel();
  Channel(const Channel&) = delete;
  Channel& operator=(const Channel&) = delete;

  void send(const Message& m);
  // False on orderly EOF; throws WireError on a malformed line.
  bool receive(Message& out);
  void close();

 private:
  int fd_ = -1;
  std::mutex send_mutex_;
  std::string buffer_;
};

class Listener {
 public:
  Listener();  // loopback, ephemeral port
  ~Listener();
  int port() const { return port_; }
  std::unique_ptr<Channel> accept();

 private:
  int fd_ = -1;
  int port_ = 0;
};

std::unique_ptr<Channel> connect_local(int port);

// ---------------------------------------------------------------------------
// Distributed round (wall-clock only)

struct ManagerConfig {
  PreparedState prepared;
  Time duration = seconds_to_time(10);
  TimingPreset timing;
  double timing_scale = 1.0;  // informational; already applied to timing
  int retry_cap = 5;
  Time retry_backoff = 0;
};

// Drives one execution round over already-connected worker channels:
// prepare/ack handshake, start, submission routing into a local ledger,
// then shutdown. Worker i on channels[i] serves prepared.terminal_ranges[i].
ExecutionResult run_manager(WorldState initial, const ManagerConfig& cfg,
                            const LedgerConfig& ledger,
                            std::vector<Channel*> workers);

// Worker side: sends hello, then runs its terminal share against the
// manager until shutdown.
void run_worker(Channel& channel, int worker_index);

}  // namespace tpcc::wire
