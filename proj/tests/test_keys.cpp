#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "tpcc/keys.hpp"
#include "tpcc/rng.hpp"

using namespace tpcc;

TEST_CASE("pad_number renders fixed-width decimal") {
  CHECK(pad_number(0, 6) == "000000");
  CHECK(pad_number(42, 6) == "000042");
  CHECK(pad_number(999999, 6) == "999999");
  CHECK(pad_number(7, 2) == "07");
  CHECK_THROWS_AS(pad_number(-1, 6), EncodingError);
  CHECK_THROWS_AS(pad_number(1000000, 6), EncodingError);
}

TEST_CASE("composite key serialization round-trips") {
  const CompositeKey key{"ORDER", {"000001", "02", "999996"}};
  const std::string s = key.serialize();
  CHECK(s == std::string("ORDER") + '\x1f' + "000001" + '\x1f' + "02" +
                 '\x1f' + "999996");
  CHECK(CompositeKey::parse(s) == key);
}

TEST_CASE("key builders produce the documented layouts") {
  // Frozen expected encodings; separator is 0x1f throughout.
  auto k = [](std::initializer_list<const char*> parts) {
    std::string out;
    for (const char* p : parts) {
      if (!out.empty()) out.push_back('\x1f');
      out += p;
    }
    return out;
  };
  CHECK(keys::warehouse(1) == k({"WAREHOUSE", "000001"}));
  CHECK(keys::district(1, 2) == k({"DISTRICT", "000001", "02"}));
  CHECK(keys::customer(1, 2, 3) == k({"CUSTOMER", "000001", "02", "000003"}));
  CHECK(keys::customer_last_name(1, 2, "BARBARBAR", 3) ==
        k({"CUSTOMER_LAST_NAME", "000001", "02", "BARBARBAR", "000003"}));
  CHECK(keys::item(99) == k({"ITEM", "000099"}));
  CHECK(keys::stock(1, 5) == k({"STOCK", "000001", "000005"}));
  // Order ids are flipped: 10^6-1-3 = 999996.
  CHECK(keys::order(1, 2, 3) == k({"ORDER", "000001", "02", "999996"}));
  // NewOrder ids are not flipped: oldest first.
  CHECK(keys::new_order(1, 2, 3) == k({"NEW_ORDER", "000001", "02", "000003"}));
  CHECK(keys::order_line(1, 2, 3, 4) ==
        k({"ORDER_LINE", "000001", "02", "000003", "04"}));
  CHECK(keys::history(1, 2, 3, 99, "t7") ==
        k({"HISTORY", "000001", "02", "000003", "0000000000000099", "t7"}));
}

TEST_CASE("separator sorts below every key component byte") {
  CHECK(kKeySeparator < '0');
  CHECK(kKeySeparator < 'A');
  CHECK(kKeySeparator < 'a');
  // A shorter type prefix that is a prefix of a longer one still shards:
  // ORDER\x1f... vs ORDER_LINE\x1f... ('_' > 0x1f+1).
  const auto r = keys::type_range("ORDER");
  CHECK(keys::order(1, 1, 1) >= r.start);
  CHECK(keys::order(999999, 10, 999998) < r.end);
  CHECK(keys::order_line(1, 1, 1, 1) >= r.end);
}

TEST_CASE("padded lexicographic order equals numeric order") {
  Rng rng(2024);
  for (int i = 0; i < 10000; ++i) {
    const std::int64_t a = rng.uniform(0, 999999);
    const std::int64_t b = rng.uniform(0, 999999);
    CHECK((pad_number(a, 6) < pad_number(b, 6)) == (a < b));
  }
}

TEST_CASE("flip_order_id is an involution that reverses order") {
  Rng rng(77);
  for (int i = 0; i < 10000; ++i) {
    const std::int64_t o = rng.uniform(1, 999998);
    CHECK(flip_order_id(flip_order_id(o, 6), 6) == o);
  }
  // Numeric descending = key ascending.
  CHECK(keys::order(1, 1, 3000) < keys::order(1, 1, 2999));
  CHECK(keys::order(1, 1, 2) < keys::order(1, 1, 1));
  CHECK_THROWS_AS(flip_order_id(0, 6), EncodingError);
  CHECK_THROWS_AS(flip_order_id(1000000, 6), EncodingError);
}

TEST_CASE("newest order iterates first under a sorted scan") {
  std::vector<std::string> ks;
  for (std::int64_t o = 1; o <= 50; ++o) ks.push_back(keys::order(3, 7, o));
  std::sort(ks.begin(), ks.end());
  CHECK(ks.front() == keys::order(3, 7, 50));
  CHECK(ks.back() == keys::order(3, 7, 1));
  for (std::size_t i = 1; i < ks.size(); ++i) {
    // Adjacent keys decode to consecutive descending ids.
    const auto a = CompositeKey::parse(ks[i - 1]);
    const auto b = CompositeKey::parse(ks[i]);
    CHECK(std::stoll(a.parts.back()) + 1 == std::stoll(b.parts.back()));
  }
}

TEST_CASE("prefix_range brackets exactly the extensions of a partial key") {
  const auto r = keys::prefix_range(keys::kOrderLine,
                                    {pad_number(1, 6), pad_number(2, 2),
                                     pad_number(3, 6)});
  CHECK(keys::order_line(1, 2, 3, 1) >= r.start);
  CHECK(keys::order_line(1, 2, 3, 15) < r.end);
  CHECK(keys::order_line(1, 2, 2, 1) < r.start);
  CHECK(keys::order_line(1, 2, 4, 1) >= r.end);
  CHECK(keys::order_line(1, 3, 3, 1) >= r.end);
}

TEST_CASE("keys of one warehouse/district cluster contiguously") {
  Rng rng(5);
  for (int i = 0; i < 1000; ++i) {
    const std::int64_t w = rng.uniform(1, 100);
    const std::int64_t d = rng.uniform(1, 10);
    const std::int64_t c1 = rng.uniform(1, 3000);
    const std::int64_t c2 = rng.uniform(1, 3000);
    CHECK((keys::customer(w, d, c1) < keys::customer(w, d, c2)) == (c1 < c2));
    const auto range = keys::prefix_range(
        keys::kCustomer, {pad_number(w, 6), pad_number(d, 2)});
    CHECK(keys::customer(w, d, c1) >= range.start);
    CHECK(keys::customer(w, d, c1) < range.end);
  }
}
