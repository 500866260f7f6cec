#include "tpcc/domain.hpp"

#include <numeric>
#include <stdexcept>

namespace tpcc {

std::string format_money(Money cents) {
  const bool neg = cents < 0;
  const Money abs = neg ? -cents : cents;
  std::string s = std::to_string(abs / 100);
  const Money frac = abs % 100;
  s += '.';
  s += static_cast<char>('0' + frac / 10);
  s += static_cast<char>('0' + frac % 10);
  return neg ? "-" + s : s;
}

const char* profile_name(Profile p) {
  switch (p) {
    case Profile::NewOrder: return "NEW_ORDER";
    case Profile::Payment: return "PAYMENT";
    case Profile::OrderStatus: return "ORDER_STATUS";
    case Profile::Delivery: return "DELIVERY";
    case Profile::StockLevel: return "STOCK_LEVEL";
  }
  return "?";
}

std::optional<Profile> profile_from_name(const std::string& name) {
  for (Profile p : kAllProfiles)
    if (name == profile_name(p)) return p;
  return std::nullopt;
}

const char* entity_type_name(EntityType t) {
  switch (t) {
    case EntityType::Warehouse: return "WAREHOUSE";
    case EntityType::District: return "DISTRICT";
    case EntityType::Customer: return "CUSTOMER";
    case EntityType::History: return "HISTORY";
    case EntityType::Item: return "ITEM";
    case EntityType::Stock: return "STOCK";
    case EntityType::Order: return "ORDER";
    case EntityType::NewOrder: return "NEW_ORDER";
    case EntityType::OrderLine: return "ORDER_LINE";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Record codec: positional fields separated by '|'. Generated strings are
// alphanumeric, so the separator never appears inside a field. Optional
// fields encode as the empty token.

namespace {

class RecordWriter {
 public:
  void field(const std::string& s) {
    if (!buf_.empty()) buf_.push_back('|');
    buf_ += s;
    empty_ = false;
  }
  void field(std::int64_t v) { field(std::to_string(v)); }
  void field(std::int32_t v) { field(std::to_string(static_cast<std::int64_t>(v))); }
  void optional_field(const std::optional<std::int64_t>& v) {
    field(v ? std::to_string(*v) : std::string());
  }
  void field(bool b) { field(std::string(b ? "1" : "0")); }
  std::string take() {
    // A single leading empty field still renders as "".
    return std::move(buf_);
  }

 private:
  std::string buf_;
  bool empty_ = true;
};

class RecordReader {
 public:
  explicit RecordReader(const std::string& s) : s_(s) {}

  std::string next() {
    if (pos_ == std::string::npos)
      throw std::runtime_error("record: missing field");
    const std::size_t sep = s_.find('|', pos_);
    std::string out = s_.substr(pos_, sep == std::string::npos
                                          ? std::string::npos
                                          : sep - pos_);
    pos_ = sep == std::string::npos ? sep : sep + 1;
    return out;
  }
  std::int64_t next_i64() { return std::stoll(next()); }
  std::int32_t next_i32() { return static_cast<std::int32_t>(next_i64()); }
  bool next_bool() { return next() == "1"; }
  std::optional<std::int64_t> next_opt_i64() {
    std::string v = next();
    if (v.empty()) return std::nullopt;
    return std::stoll(v);
  }

 private:
  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string encode(const Warehouse& w) {
  RecordWriter r;
  r.field(w.w_id);
  r.field(w.name);
  r.field(w.street_1);
  r.field(w.street_2);
  r.field(w.city);
  r.field(w.state);
  r.field(w.zip);
  r.field(w.tax_bp);
  r.field(w.ytd);
  return r.take();
}

Warehouse decode_warehouse(const std::string& s) {
  RecordReader r(s);
  Warehouse w;
  w.w_id = r.next_i64();
  w.name = r.next();
  w.street_1 = r.next();
  w.street_2 = r.next();
  w.city = r.next();
  w.state = r.next();
  w.zip = r.next();
  w.tax_bp = r.next_i32();
  w.ytd = r.next_i64();
  return w;
}

std::string encode(const District& d) {
  RecordWriter r;
  r.field(d.w_id);
  r.field(d.d_id);
  r.field(d.name);
  r.field(d.street_1);
  r.field(d.street_2);
  r.field(d.city);
  r.field(d.state);
  r.field(d.zip);
  r.field(d.tax_bp);
  r.field(d.ytd);
  r.field(d.next_o_id);
  return r.take();
}

District decode_district(const std::string& s) {
  RecordReader r(s);
  District d;
  d.w_id = r.next_i64();
  d.d_id = r.next_i64();
  d.name = r.next();
  d.street_1 = r.next();
  d.street_2 = r.next();
  d.city = r.next();
  d.state = r.next();
  d.zip = r.next();
  d.tax_bp = r.next_i32();
  d.ytd = r.next_i64();
  d.next_o_id = r.next_i64();
  return d;
}

std::string encode(const Customer& c) {
  RecordWriter r;
  r.field(c.w_id);
  r.field(c.d_id);
  r.field(c.c_id);
  r.field(c.first);
  r.field(c.middle);
  r.field(c.last);
  r.field(c.street_1);
  r.field(c.street_2);
  r.field(c.city);
  r.field(c.state);
  r.field(c.zip);
  r.field(c.phone);
  r.field(c.since);
  r.field(c.credit);
  r.field(c.credit_lim);
  r.field(c.discount_bp);
  r.field(c.balance);
  r.field(c.ytd_payment);
  r.field(c.payment_cnt);
  r.field(c.delivery_cnt);
  r.field(c.data);
  return r.take();
}

Customer decode_customer(const std::string& s) {
  RecordReader r(s);
  Customer c;
  c.w_id = r.next_i64();
  c.d_id = r.next_i64();
  c.c_id = r.next_i64();
  c.first = r.next();
  c.middle = r.next();
  c.last = r.next();
  c.street_1 = r.next();
  c.street_2 = r.next();
  c.city = r.next();
  c.state = r.next();
  c.zip = r.next();
  c.phone = r.next();
  c.since = r.next_i64();
  c.credit = r.next();
  c.credit_lim = r.next_i64();
  c.discount_bp = r.next_i32();
  c.balance = r.next_i64();
  c.ytd_payment = r.next_i64();
  c.payment_cnt = r.next_i64();
  c.delivery_cnt = r.next_i64();
  c.data = r.next();
  return c;
}

std::string encode(const History& h) {
  RecordWriter r;
  r.field(h.c_w_id);
  r.field(h.c_d_id);
  r.field(h.c_id);
  r.field(h.w_id);
  r.field(h.d_id);
  r.field(h.date);
  r.field(h.amount);
  r.field(h.data);
  r.field(h.client_timestamp);
  r.field(h.client_id);
  return r.take();
}

History decode_history(const std::string& s) {
  RecordReader r(s);
  History h;
  h.c_w_id = r.next_i64();
  h.c_d_id = r.next_i64();
  h.c_id = r.next_i64();
  h.w_id = r.next_i64();
  h.d_id = r.next_i64();
  h.date = r.next_i64();
  h.amount = r.next_i64();
  h.data = r.next();
  h.client_timestamp = r.next_i64();
  h.client_id = r.next();
  return h;
}

std::string encode(const Item& i) {
  RecordWriter r;
  r.field(i.i_id);
  r.field(i.im_id);
  r.field(i.name);
  r.field(i.price);
  r.field(i.data);
  return r.take();
}

Item decode_item(const std::string& s) {
  RecordReader r(s);
  Item i;
  i.i_id = r.next_i64();
  i.im_id = r.next_i64();
  i.name = r.next();
  i.price = r.next_i64();
  i.data = r.next();
  return i;
}

std::string encode(const Stock& st) {
  RecordWriter r;
  r.field(st.w_id);
  r.field(st.i_id);
  r.field(st.quantity);
  for (const auto& d : st.dist) r.field(d);
  r.field(st.ytd);
  r.field(st.order_cnt);
  r.field(st.remote_cnt);
  r.field(st.data);
  return r.take();
}

Stock decode_stock(const std::string& s) {
  RecordReader r(s);
  Stock st;
  st.w_id = r.next_i64();
  st.i_id = r.next_i64();
  st.quantity = r.next_i64();
  for (auto& d : st.dist) d = r.next();
  st.ytd = r.next_i64();
  st.order_cnt = r.next_i64();
  st.remote_cnt = r.next_i64();
  st.data = r.next();
  return st;
}

std::string encode(const Order& o) {
  RecordWriter r;
  r.field(o.w_id);
  r.field(o.d_id);
  r.field(o.o_id);
  r.field(o.c_id);
  r.field(o.entry_d);
  r.optional_field(o.carrier_id);
  r.field(o.ol_cnt);
  r.field(o.all_local);
  return r.take();
}

Order decode_order(const std::string& s) {
  RecordReader r(s);
  Order o;
  o.w_id = r.next_i64();
  o.d_id = r.next_i64();
  o.o_id = r.next_i64();
  o.c_id = r.next_i64();
  o.entry_d = r.next_i64();
  o.carrier_id = r.next_opt_i64();
  o.ol_cnt = r.next_i64();
  o.all_local = r.next_bool();
  return o;
}

std::string encode(const NewOrderRow& n) {
  RecordWriter r;
  r.field(n.w_id);
  r.field(n.d_id);
  r.field(n.o_id);
  return r.take();
}

NewOrderRow decode_new_order_row(const std::string& s) {
  RecordReader r(s);
  NewOrderRow n;
  n.w_id = r.next_i64();
  n.d_id = r.next_i64();
  n.o_id = r.next_i64();
  return n;
}

std::string encode(const OrderLine& l) {
  RecordWriter r;
  r.field(l.w_id);
  r.field(l.d_id);
  r.field(l.o_id);
  r.field(l.number);
  r.field(l.i_id);
  r.field(l.supply_w_id);
  std::optional<std::int64_t> dd;
  if (l.delivery_d) dd = *l.delivery_d;
  r.optional_field(dd);
  r.field(l.quantity);
  r.field(l.amount);
  r.field(l.dist_info);
  return r.take();
}

OrderLine decode_order_line(const std::string& s) {
  RecordReader r(s);
  OrderLine l;
  l.w_id = r.next_i64();
  l.d_id = r.next_i64();
  l.o_id = r.next_i64();
  l.number = r.next_i64();
  l.i_id = r.next_i64();
  l.supply_w_id = r.next_i64();
  l.delivery_d = r.next_opt_i64();
  l.quantity = r.next_i64();
  l.amount = r.next_i64();
  l.dist_info = r.next();
  return l;
}

// ---------------------------------------------------------------------------
// Population

NurandConstants NurandConstants::derive(std::uint64_t seed) {
  Rng rng(seed ^ 0xc0ffee1234567890ULL);
  NurandConstants c;
  c.c_last = rng.uniform(0, 255);
  c.c_id = rng.uniform(0, 1023);
  c.ol_i = rng.uniform(0, 8191);
  return c;
}

namespace {

std::string data_string(Rng& rng) {
  // 10% of item/stock data strings carry the ORIGINAL marker.
  if (rng.chance_percent(10)) {
    std::string base = rng.astring(18, 42);
    const std::size_t pos =
        static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(base.size())));
    return base.substr(0, pos) + "ORIGINAL" + base.substr(pos);
  }
  return rng.astring(26, 50);
}

std::string zip_code(Rng& rng) { return rng.nstring(4, 4) + "11111"; }

std::string customer_last_name_for(std::int64_t c_id,
                                   const NurandConstants& nc, Rng& rng) {
  if (c_id <= 1000) return syllable_last_name(static_cast<int>(c_id - 1));
  return syllable_last_name(
      static_cast<int>(nurand(255, 0, 999, nc.c_last, rng)));
}

}  // namespace

void generate_initial_population(int warehouse_count, std::uint64_t seed,
                                 const NurandConstants& nc,
                                 const EntitySink& emit) {
  if (warehouse_count < 0)
    throw std::invalid_argument("generate_initial_population: warehouse_count");
  Rng rng(seed);

  {
    Rng item_rng = rng.derive(1);
    for (std::int64_t i = 1; i <= kItemCount; ++i) {
      Item item;
      item.i_id = i;
      item.im_id = item_rng.uniform(1, 10000);
      item.name = item_rng.astring(14, 24);
      item.price = item_rng.uniform(100, 10000);
      item.data = data_string(item_rng);
      emit(EntityType::Item, encode(item));
    }
  }

  for (std::int64_t w = 1; w <= warehouse_count; ++w) {
    Rng wrng = rng.derive(0x10000 + static_cast<std::uint64_t>(w));

    Warehouse wh;
    wh.w_id = w;
    wh.name = wrng.astring(6, 10);
    wh.street_1 = wrng.astring(10, 20);
    wh.street_2 = wrng.astring(10, 20);
    wh.city = wrng.astring(10, 20);
    wh.state = wrng.astring(2, 2);
    wh.zip = zip_code(wrng);
    wh.tax_bp = static_cast<BasisPoints>(wrng.uniform(0, 2000));
    wh.ytd = 30000000;
    emit(EntityType::Warehouse, encode(wh));

    for (std::int64_t i = 1; i <= kStockPerWarehouse; ++i) {
      Stock st;
      st.w_id = w;
      st.i_id = i;
      st.quantity = wrng.uniform(10, 100);
      for (auto& dist : st.dist) dist = wrng.astring(24, 24);
      st.data = data_string(wrng);
      emit(EntityType::Stock, encode(st));
    }

    for (std::int64_t d = 1; d <= kDistrictsPerWarehouse; ++d) {
      District dist;
      dist.w_id = w;
      dist.d_id = d;
      dist.name = wrng.astring(6, 10);
      dist.street_1 = wrng.astring(10, 20);
      dist.street_2 = wrng.astring(10, 20);
      dist.city = wrng.astring(10, 20);
      dist.state = wrng.astring(2, 2);
      dist.zip = zip_code(wrng);
      dist.tax_bp = static_cast<BasisPoints>(wrng.uniform(0, 2000));
      dist.ytd = 3000000;
      dist.next_o_id = kOrdersPerDistrict + 1;
      emit(EntityType::District, encode(dist));

      for (std::int64_t c = 1; c <= kCustomersPerDistrict; ++c) {
        Customer cust;
        cust.w_id = w;
        cust.d_id = d;
        cust.c_id = c;
        cust.last = customer_last_name_for(c, nc, wrng);
        cust.middle = "OE";
        cust.first = wrng.astring(8, 16);
        cust.street_1 = wrng.astring(10, 20);
        cust.street_2 = wrng.astring(10, 20);
        cust.city = wrng.astring(10, 20);
        cust.state = wrng.astring(2, 2);
        cust.zip = zip_code(wrng);
        cust.phone = wrng.nstring(16, 16);
        cust.since = 0;
        cust.credit = wrng.chance_percent(10) ? "BC" : "GC";
        cust.credit_lim = 5000000;
        cust.discount_bp = static_cast<BasisPoints>(wrng.uniform(0, 5000));
        cust.balance = -1000;
        cust.ytd_payment = 1000;
        cust.payment_cnt = 1;
        cust.delivery_cnt = 0;
        cust.data = wrng.astring(300, 500);
        emit(EntityType::Customer, encode(cust));

        History h;
        h.c_w_id = w;
        h.c_d_id = d;
        h.c_id = c;
        h.w_id = w;
        h.d_id = d;
        h.date = 0;
        h.amount = 1000;
        h.data = wrng.astring(12, 24);
        h.client_timestamp = 0;
        h.client_id = "load";
        emit(EntityType::History, encode(h));
      }

      // Order o_id -> customer assignment is a random permutation.
      std::vector<std::int64_t> perm(kCustomersPerDistrict);
      std::iota(perm.begin(), perm.end(), 1);
      for (std::size_t i = perm.size() - 1; i > 0; --i) {
        const auto j = static_cast<std::size_t>(
            wrng.uniform(0, static_cast<std::int64_t>(i)));
        std::swap(perm[i], perm[j]);
      }

      for (std::int64_t o = 1; o <= kOrdersPerDistrict; ++o) {
        Order order;
        order.w_id = w;
        order.d_id = d;
        order.o_id = o;
        order.c_id = perm[static_cast<std::size_t>(o - 1)];
        order.entry_d = 0;
        const bool delivered = o < kFirstUndeliveredOrder;
        if (delivered) order.carrier_id = wrng.uniform(1, 10);
        order.ol_cnt = wrng.uniform(5, 15);
        order.all_local = true;
        emit(EntityType::Order, encode(order));

        for (std::int64_t ln = 1; ln <= order.ol_cnt; ++ln) {
          OrderLine ol;
          ol.w_id = w;
          ol.d_id = d;
          ol.o_id = o;
          ol.number = ln;
          ol.i_id = wrng.uniform(1, kItemCount);
          ol.supply_w_id = w;
          if (delivered) {
            ol.delivery_d = order.entry_d;
            ol.amount = 0;
          } else {
            ol.amount = wrng.uniform(1, 999999);
          }
          ol.quantity = 5;
          ol.dist_info = wrng.astring(24, 24);
          emit(EntityType::OrderLine, encode(ol));
        }

        if (!delivered) {
          NewOrderRow no;
          no.w_id = w;
          no.d_id = d;
          no.o_id = o;
          emit(EntityType::NewOrder, encode(no));
        }
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Profile inputs

ProfileInput generate_profile_input(Profile profile, int warehouse_count,
                                    std::int64_t home_w, std::int64_t home_d,
                                    const NurandConstants& nc, Rng& rng) {
  if (home_w < 1 || home_w > warehouse_count)
    throw std::invalid_argument("generate_profile_input: home_w out of range");
  ProfileInput in;
  in.profile = profile;
  auto& a = in.args;
  auto push = [&a](std::int64_t v) { a.push_back(std::to_string(v)); };

  auto remote_warehouse = [&]() {
    // Pick a warehouse other than home, uniformly.
    std::int64_t w = rng.uniform(1, warehouse_count - 1);
    if (w >= home_w) ++w;
    return w;
  };

  switch (profile) {
    case Profile::NewOrder: {
      push(home_w);
      push(rng.uniform(1, kDistrictsPerWarehouse));
      push(nurand(1023, 1, kCustomersPerDistrict, nc.c_id, rng));
      const std::int64_t ol_cnt = rng.uniform(5, 15);
      push(ol_cnt);
      const bool rollback = rng.chance_percent(1);
      for (std::int64_t i = 0; i < ol_cnt; ++i) {
        std::int64_t i_id = nurand(8191, 1, kItemCount, nc.ol_i, rng);
        if (rollback && i == ol_cnt - 1) i_id = kUnusedItemId;
        push(i_id);
        const bool remote = warehouse_count > 1 && rng.chance_percent(1);
        push(remote ? remote_warehouse() : home_w);
        push(rng.uniform(1, 10));
      }
      break;
    }
    case Profile::Payment: {
      push(home_w);
      push(rng.uniform(1, kDistrictsPerWarehouse));
      const bool remote = warehouse_count > 1 && rng.chance_percent(15);
      const std::int64_t c_w = remote ? remote_warehouse() : home_w;
      push(c_w);
      push(rng.uniform(1, kDistrictsPerWarehouse));
      if (rng.chance_percent(60)) {
        a.push_back("last");
        a.push_back(syllable_last_name(
            static_cast<int>(nurand(255, 0, 999, nc.c_last, rng))));
      } else {
        a.push_back("id");
        push(nurand(1023, 1, kCustomersPerDistrict, nc.c_id, rng));
      }
      push(rng.uniform(100, 500000));  // amount in cents
      break;
    }
    case Profile::OrderStatus: {
      push(home_w);
      push(rng.uniform(1, kDistrictsPerWarehouse));
      if (rng.chance_percent(60)) {
        a.push_back("last");
        a.push_back(syllable_last_name(
            static_cast<int>(nurand(255, 0, 999, nc.c_last, rng))));
      } else {
        a.push_back("id");
        push(nurand(1023, 1, kCustomersPerDistrict, nc.c_id, rng));
      }
      break;
    }
    case Profile::Delivery: {
      push(home_w);
      push(rng.uniform(1, 10));  // carrier
      break;
    }
    case Profile::StockLevel: {
      push(home_w);
      push(home_d);
      push(rng.uniform(10, 20));
      break;
    }
  }
  return in;
}

}  // namespace tpcc
