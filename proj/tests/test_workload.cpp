#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "tpcc/profiles.hpp"
#include "tpcc/registry.hpp"

using namespace tpcc;

namespace {

void apply_writes(WorldState& state, const EndorsementContext& ctx) {
  for (const auto& [key, value] : ctx.rw_set().writes) {
    if (value)
      state.put(key, *value, Version{});
    else
      state.del(key);
  }
}

// A two-district micro-world with hand-picked values so every profile result
// can be computed by hand.
WorldState micro_world() {
  WorldState state;
  EndorsementContext ctx(state);
  Registry reg(ctx);

  Warehouse w;
  w.w_id = 1;
  w.name = "Wh";
  w.tax_bp = 1000;  // 10%
  reg.create(w);

  for (std::int64_t d_id = 1; d_id <= 2; ++d_id) {
    District d;
    d.w_id = 1;
    d.d_id = d_id;
    d.name = "D" + std::to_string(d_id);
    d.tax_bp = 500;  // 5%
    d.next_o_id = d_id == 1 ? 4 : 1;
    reg.create(d);
  }

  // Three customers in district 1 share a last name; c_id 2 is the middle
  // match. One lone-named customer sits in district 2.
  for (std::int64_t c_id = 1; c_id <= 3; ++c_id) {
    Customer c;
    c.w_id = 1;
    c.d_id = 1;
    c.c_id = c_id;
    c.first = "F" + std::to_string(c_id);
    c.middle = "OE";
    c.last = "BARBARBAR";
    c.credit = c_id == 3 ? "BC" : "GC";
    c.credit_lim = 5000000;
    c.discount_bp = 1000;  // 10%
    c.balance = -1000;
    reg.create(c);
  }
  Customer lone;
  lone.w_id = 1;
  lone.d_id = 2;
  lone.c_id = 1;
  lone.last = "OUGHTPRIESE";
  lone.credit = "GC";
  reg.create(lone);

  for (std::int64_t i_id = 1; i_id <= 2; ++i_id) {
    Item it;
    it.i_id = i_id;
    it.name = "item" + std::to_string(i_id);
    it.price = i_id == 1 ? 500 : 250;
    reg.create(it);

    Stock s;
    s.w_id = 1;
    s.i_id = i_id;
    s.quantity = i_id == 1 ? 50 : 12;
    for (auto& di : s.dist) di = "dist-info";
    reg.create(s);
  }

  // District 1 history: orders 1..3; order 1 delivered, 2 and 3 pending.
  for (std::int64_t o_id = 1; o_id <= 3; ++o_id) {
    Order o;
    o.w_id = 1;
    o.d_id = 1;
    o.o_id = o_id;
    o.c_id = o_id;  // order k belongs to customer k
    o.entry_d = 1000 * o_id;
    o.ol_cnt = 2;
    if (o_id == 1) o.carrier_id = 5;
    reg.create(o);
    if (o_id > 1) reg.create(NewOrderRow{1, 1, o_id});
    for (std::int64_t n = 1; n <= 2; ++n) {
      OrderLine l;
      l.w_id = 1;
      l.d_id = 1;
      l.o_id = o_id;
      l.number = n;
      l.i_id = n;
      l.supply_w_id = 1;
      l.quantity = 5;
      l.amount = o_id == 1 ? 0 : 100 * o_id + n;  // delivered lines cost 0
      if (o_id == 1) l.delivery_d = 777;
      l.dist_info = "dist-info";
      reg.create(l);
    }
  }

  apply_writes(state, ctx);
  state.freeze();
  return state;
}

}  // namespace

TEST_CASE("registry round-trips entities and enforces existence") {
  WorldState state = micro_world();
  EndorsementContext ctx(state);
  Registry reg(ctx);

  CHECK(reg.read_warehouse(1).tax_bp == 1000);
  CHECK(reg.read_district(1, 1).next_o_id == 4);
  CHECK(reg.read_customer(1, 1, 2).first == "F2");
  CHECK(reg.try_read_item(1)->price == 500);
  CHECK(!reg.try_read_item(99).has_value());
  CHECK_THROWS_AS(reg.read_customer(1, 1, 99), NotFoundError);

  Warehouse dup;
  dup.w_id = 1;
  CHECK_THROWS_AS(reg.create(dup), AlreadyExistsError);
}

TEST_CASE("last-name lookup returns matches in c_id order") {
  WorldState state = micro_world();
  EndorsementContext ctx(state);
  Registry reg(ctx);
  const auto matches = reg.customers_by_last_name(1, 1, "BARBARBAR");
  REQUIRE(matches.size() == 3);
  CHECK(matches[0].c_id == 1);
  CHECK(matches[1].c_id == 2);
  CHECK(matches[2].c_id == 3);
  CHECK(reg.customers_by_last_name(1, 1, "ZZZ").empty());
}

TEST_CASE("newest_orders and oldest_new_order agree with brute force") {
  WorldState state = micro_world();
  EndorsementContext ctx(state);
  Registry reg(ctx);

  const auto newest = reg.newest_orders(1, 1, 2);
  REQUIRE(newest.size() == 2);
  CHECK(newest[0].o_id == 3);
  CHECK(newest[1].o_id == 2);

  const auto oldest = reg.oldest_new_order(1, 1);
  REQUIRE(oldest.has_value());
  CHECK(oldest->o_id == 2);
  CHECK(!reg.oldest_new_order(1, 2).has_value());

  const auto lines = reg.order_lines(1, 1, 2);
  REQUIRE(lines.size() == 2);
  CHECK(lines[0].number == 1);
  CHECK(lines[0].amount == 201);
  CHECK(lines[1].amount == 202);

  // Range across orders 2..3 = 4 lines; brute force agrees.
  const auto between = reg.order_lines_between(1, 1, 2, 3);
  CHECK(between.size() == 4);
  std::int64_t brute = 0;
  for (std::int64_t o = 2; o <= 3; ++o)
    brute += static_cast<std::int64_t>(reg.order_lines(1, 1, o).size());
  CHECK(static_cast<std::int64_t>(between.size()) == brute);
}

TEST_CASE("new order applies pricing, stock rules, and key writes") {
  WorldState state = micro_world();
  EndorsementContext ctx(state);
  const auto res = do_new_order(
      ctx, {"1", "1", "1", "2", "1", "1", "5", "2", "1", "5", "123", "t0"});
  CHECK(res.outcome == ChaincodeOutcome::Ok);
  // amount_sum = 5*500 + 5*250 = 3750 cents; discount 10%, taxes 10%+5%:
  // 3750 * 0.9 * 1.15 = 3881.25 -> 3881.
  CHECK(res.payload == "o_id=4;ol_cnt=2;total=38.81");

  // district + order + new-order row + 2 stock + 2 lines = 7 writes.
  CHECK(ctx.stats().write_count == 7);
  CHECK(ctx.stats().range_read_count == 0);

  apply_writes(state, ctx);
  EndorsementContext after(state);
  Registry reg(after);
  CHECK(reg.read_district(1, 1).next_o_id == 5);
  // Stock 1: 50-5=45 (>=10). Stock 2: 12-5 < 10, so 12-5+91 = 98.
  CHECK(reg.read_stock(1, 1).quantity == 45);
  CHECK(reg.read_stock(1, 2).quantity == 98);
  CHECK(reg.read_stock(1, 1).ytd == 5);
  CHECK(reg.read_stock(1, 1).order_cnt == 1);
  const Order o = reg.read_order(1, 1, 4);
  CHECK(o.c_id == 1);
  CHECK(o.entry_d == 123);
  CHECK(o.all_local);
  CHECK(reg.oldest_new_order(1, 1)->o_id == 2);  // 2 is still oldest
  const auto lines = reg.order_lines(1, 1, 4);
  REQUIRE(lines.size() == 2);
  CHECK(lines[0].amount == 2500);
  CHECK(lines[1].amount == 1250);
}

TEST_CASE("new order with the unused item id rolls back") {
  WorldState state = micro_world();
  EndorsementContext ctx(state);
  CHECK_THROWS_AS(
      do_new_order(ctx, {"1", "1", "1", "2", "1", "1", "5",
                         std::to_string(kUnusedItemId), "1", "5", "9", "t0"}),
      BusinessRollback);
}

TEST_CASE("payment updates balances and picks the middle name match") {
  WorldState state = micro_world();
  EndorsementContext ctx(state);
  const auto res = do_payment(
      ctx, {"1", "1", "1", "1", "last", "BARBARBAR", "1500", "42", "t3"});
  CHECK(res.outcome == ChaincodeOutcome::Ok);
  // Middle of three matches is c_id 2; balance -1000 - 1500 = -2500.
  CHECK(res.payload == "c_id=2;balance=-25.00");

  apply_writes(state, ctx);
  EndorsementContext after(state);
  Registry reg(after);
  CHECK(reg.read_warehouse(1).ytd == 1500);
  CHECK(reg.read_district(1, 1).ytd == 1500);
  const Customer c = reg.read_customer(1, 1, 2);
  CHECK(c.balance == -2500);
  CHECK(c.ytd_payment == 1500);
  CHECK(c.payment_cnt == 1);
  CHECK(c.data.empty());  // GC credit leaves data untouched
}

TEST_CASE("payment by id onto bad credit prepends history data") {
  WorldState state = micro_world();
  EndorsementContext ctx(state);
  const auto res =
      do_payment(ctx, {"1", "1", "1", "1", "id", "3", "200", "42", "t3"});
  CHECK(res.payload == "c_id=3;balance=-12.00");
  apply_writes(state, ctx);
  EndorsementContext after(state);
  Registry reg(after);
  CHECK(reg.read_customer(1, 1, 3).data == "3-1-1-1-1-200;");
}

TEST_CASE("order status reports the newest order of the district") {
  WorldState state = micro_world();
  EndorsementContext ctx(state);
  const auto res = do_order_status(ctx, {"1", "1", "id", "1", "5", "t1"});
  CHECK(res.payload == "c_id=1;o_id=3;carrier=0;lines=2");
  CHECK(ctx.stats().write_count == 0);  // read-only profile

  EndorsementContext empty_d(state);
  const auto none = do_order_status(empty_d, {"1", "2", "id", "1", "5", "t1"});
  CHECK(none.payload == "c_id=1;orders=none");
}

TEST_CASE("delivery completes the oldest pending order per district") {
  WorldState state = micro_world();
  EndorsementContext ctx(state);
  const auto res = do_delivery(ctx, {"1", "7", "555", "t2"});
  // District 1 delivers order 2; districts 2..10 have nothing pending.
  CHECK(res.payload == "delivered=1:2;skipped=2;3;4;5;6;7;8;9;10");

  apply_writes(state, ctx);
  EndorsementContext after(state);
  Registry reg(after);
  CHECK(reg.oldest_new_order(1, 1)->o_id == 3);
  const Order o = reg.read_order(1, 1, 2);
  CHECK(o.carrier_id == 7);
  for (const OrderLine& l : reg.order_lines(1, 1, 2))
    CHECK(l.delivery_d == 555);
  // Customer 2 owned order 2; balance -1000 + (201 + 202) = -597.
  const Customer c = reg.read_customer(1, 1, 2);
  CHECK(c.balance == -597);
  CHECK(c.delivery_cnt == 1);
}

TEST_CASE("stock level counts distinct recent items under the threshold") {
  WorldState state = micro_world();
  EndorsementContext ctx(state);
  // District 1 recent orders 1..3 reference items {1, 2}; quantities are
  // 50 and 12, so a threshold of 20 catches only item 2.
  const auto res = do_stock_level(ctx, {"1", "1", "20", "5", "t4"});
  CHECK(res.payload == "low_stock=1");
  CHECK(ctx.stats().range_read_count >= 1);

  EndorsementContext hi(state);
  CHECK(do_stock_level(hi, {"1", "1", "60", "5", "t4"}).payload ==
        "low_stock=2");
  EndorsementContext lo(state);
  CHECK(do_stock_level(lo, {"1", "1", "10", "5", "t4"}).payload ==
        "low_stock=0");
}

TEST_CASE("load batch creates typed entities from tagged records") {
  WorldState state;
  EndorsementContext ctx(state);
  Item it;
  it.i_id = 9;
  it.name = "thing";
  it.price = 123;
  Warehouse w;
  w.w_id = 2;
  w.name = "W2";
  const auto res = do_load_batch(
      ctx, {"2", encode_load_entity(EntityType::Item, encode(it)),
            encode_load_entity(EntityType::Warehouse, encode(w)), "0", "load"});
  CHECK(res.payload == "loaded=2");
  apply_writes(state, ctx);
  EndorsementContext after(state);
  Registry reg(after);
  CHECK(reg.try_read_item(9)->price == 123);
  CHECK(reg.read_warehouse(2).name == "W2");

  EndorsementContext bad(state);
  CHECK_THROWS_AS(do_load_batch(bad, {"1", "no-separator", "0", "x"}),
                  std::invalid_argument);
}
