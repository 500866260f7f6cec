#include "tpcc/rng.hpp"

#include <array>

namespace tpcc {

std::uint64_t Rng::next_u64() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::int64_t Rng::uniform(std::int64_t lo, std::int64_t hi) {
  if (lo > hi) throw std::invalid_argument("Rng::uniform: lo > hi");
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<std::int64_t>(next_u64() % span);
}

double Rng::uniform01() {
  // 53 significant bits; +1 keeps the value strictly positive.
  return (static_cast<double>(next_u64() >> 11) + 1.0) / 9007199254740993.0;
}

namespace {
constexpr char kAlnum[] =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789";
}

std::string Rng::astring(int lo, int hi) {
  const int len = static_cast<int>(uniform(lo, hi));
  std::string s;
  s.reserve(static_cast<std::size_t>(len));
  for (int i = 0; i < len; ++i)
    s.push_back(kAlnum[uniform(0, 61)]);
  return s;
}

std::string Rng::nstring(int lo, int hi) {
  const int len = static_cast<int>(uniform(lo, hi));
  std::string s;
  s.reserve(static_cast<std::size_t>(len));
  for (int i = 0; i < len; ++i)
    s.push_back(static_cast<char>('0' + uniform(0, 9)));
  return s;
}

Rng Rng::derive(std::uint64_t stream) const {
  Rng child(state_ ^ (stream * 0xd6e8feb86659fd93ULL));
  child.next_u64();
  return child;
}

std::int64_t nurand(std::int64_t a, std::int64_t x, std::int64_t y,
                    std::int64_t c, Rng& rng) {
  if (x > y || a < 0 || c < 0)
    throw std::invalid_argument("nurand: invalid range");
  const std::int64_t lhs = rng.uniform(0, a);
  const std::int64_t rhs = rng.uniform(x, y);
  return (((lhs | rhs) + c) % (y - x + 1)) + x;
}

std::string syllable_last_name(int n) {
  static const std::array<const char*, 10> kSyllables = {
      "BAR", "OUGHT", "ABLE", "PRI",   "PRES",
      "ESE", "ANTI",  "CALLY", "ATION", "EING"};
  if (n < 0 || n > 999)
    throw std::invalid_argument("syllable_last_name: n out of range");
  std::string s;
  s += kSyllables[static_cast<std::size_t>(n / 100)];
  s += kSyllables[static_cast<std::size_t>((n / 10) % 10)];
  s += kSyllables[static_cast<std::size_t>(n % 10)];
  return s;
}

}  // namespace tpcc
