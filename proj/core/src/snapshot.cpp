#include "tpcc/snapshot.hpp"

#include <cstdint>
#include <fstream>

namespace tpcc {

namespace {

constexpr char kMagic[] = "TPCCSNAP1";
constexpr std::size_t kMagicLen = sizeof(kMagic) - 1;

void write_u64(std::ostream& os, std::uint64_t v) {
  char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>(v >> (8 * i));
  os.write(buf, 8);
}

void write_u32(std::ostream& os, std::uint32_t v) {
  char buf[4];
  for (int i = 0; i < 4; ++i) buf[i] = static_cast<char>(v >> (8 * i));
  os.write(buf, 4);
}

void write_string(std::ostream& os, const std::string& s) {
  write_u32(os, static_cast<std::uint32_t>(s.size()));
  os.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::uint64_t read_u64(std::istream& is) {
  char buf[8];
  is.read(buf, 8);
  if (!is) throw SnapshotError("truncated snapshot");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i)
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf[i]))
         << (8 * i);
  return v;
}

std::uint32_t read_u32(std::istream& is) {
  char buf[4];
  is.read(buf, 4);
  if (!is) throw SnapshotError("truncated snapshot");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i)
    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(buf[i]))
         << (8 * i);
  return v;
}

std::string read_string(std::istream& is) {
  const std::uint32_t n = read_u32(is);
  std::string s(n, '\0');
  is.read(s.data(), static_cast<std::streamsize>(n));
  if (!is) throw SnapshotError("truncated snapshot");
  return s;
}

}  // namespace

void write_snapshot(std::ostream& os, const WorldState& state) {
  os.write(kMagic, static_cast<std::streamsize>(kMagicLen));
  write_u64(os, state.height());
  write_u64(os, state.size());
  state.for_each([&](const std::string& key, const VersionedValue& vv) {
    write_string(os, key);
    write_string(os, vv.value);
    write_u64(os, vv.version.block_no);
    write_u32(os, vv.version.tx_index);
  });
  if (!os) throw SnapshotError("snapshot write failed");
}

WorldState read_snapshot(std::istream& is) {
  char magic[kMagicLen];
  is.read(magic, static_cast<std::streamsize>(kMagicLen));
  if (!is || std::string(magic, kMagicLen) != kMagic)
    throw SnapshotError("not a snapshot file");
  WorldState state;
  state.set_height(read_u64(is));
  const std::uint64_t count = read_u64(is);
  for (std::uint64_t i = 0; i < count; ++i) {
    std::string key = read_string(is);
    std::string value = read_string(is);
    Version version;
    version.block_no = read_u64(is);
    version.tx_index = read_u32(is);
    state.put(key, std::move(value), version);
  }
  state.freeze();
  return state;
}

void save_snapshot_file(const std::string& path, const WorldState& state) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw SnapshotError("cannot open for writing: " + path);
  write_snapshot(os, state);
}

WorldState load_snapshot_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw SnapshotError("cannot open snapshot: " + path);
  return read_snapshot(is);
}

}  // namespace tpcc
