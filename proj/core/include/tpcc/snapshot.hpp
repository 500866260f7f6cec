#pragma once

#include <istream>
#include <ostream>
#include <string>

#include "tpcc/ledger.hpp"

namespace tpcc {

class SnapshotError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Binary world-state image: magic + height + entry count, then
// length-prefixed (key, value, version) triples in key order. Write/read
// round-trips hashes exactly.
void write_snapshot(std::ostream& os, const WorldState& state);
WorldState read_snapshot(std::istream& is);

void save_snapshot_file(const std::string& path, const WorldState& state);
WorldState load_snapshot_file(const std::string& path);

}  // namespace tpcc
