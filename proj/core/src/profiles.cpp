#include "tpcc/profiles.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace tpcc {

namespace {

// Contract-API unmarshaling: raw strings to typed values, with position
// checks.
class Args {
 public:
  explicit Args(const std::vector<std::string>& args) : args_(args) {}

  const std::string& next() {
    if (pos_ >= args_.size())
      throw std::invalid_argument("missing argument at position " +
                                  std::to_string(pos_));
    return args_[pos_++];
  }
  std::int64_t next_i64() { return std::stoll(next()); }

 private:
  const std::vector<std::string>& args_;
  std::size_t pos_ = 0;
};

std::string kv(const std::string& key, const std::string& value) {
  return key + "=" + value;
}

std::string kv(const std::string& key, std::int64_t value) {
  return kv(key, std::to_string(value));
}

std::string join(const std::vector<std::string>& fields) {
  std::string out;
  for (const auto& f : fields) {
    if (!out.empty()) out.push_back(';');
    out += f;
  }
  return out;
}

// ceil(n/2)-th match (1-based) of the name-ordered list.
const Customer& middle_by_last_name(const std::vector<Customer>& matches) {
  if (matches.empty())
    throw NotFoundError("no customer matches last name");
  return matches[(matches.size() + 1) / 2 - 1];
}

Customer resolve_customer(Registry& reg, std::int64_t w, std::int64_t d,
                          const std::string& mode, const std::string& cust) {
  if (mode == "id") return reg.read_customer(w, d, std::stoll(cust));
  if (mode == "last")
    return middle_by_last_name(reg.customers_by_last_name(w, d, cust));
  throw std::invalid_argument("unknown customer selection mode: " + mode);
}

}  // namespace

ChaincodeResult do_new_order(EndorsementContext& ctx,
                             const std::vector<std::string>& args) {
  Args a(args);
  Registry reg(ctx);

  const std::int64_t w_id = a.next_i64();
  const std::int64_t d_id = a.next_i64();
  const std::int64_t c_id = a.next_i64();
  const std::int64_t ol_cnt = a.next_i64();
  struct Line {
    std::int64_t i_id, supply_w, quantity;
  };
  std::vector<Line> lines;
  for (std::int64_t i = 0; i < ol_cnt; ++i) {
    Line l{};
    l.i_id = a.next_i64();
    l.supply_w = a.next_i64();
    l.quantity = a.next_i64();
    lines.push_back(l);
  }
  const Time now = a.next_i64();

  Warehouse warehouse = reg.read_warehouse(w_id);
  District district = reg.read_district(w_id, d_id);
  Customer customer = reg.read_customer(w_id, d_id, c_id);

  const std::int64_t o_id = district.next_o_id;
  district.next_o_id += 1;
  reg.update(district);

  Order order;
  order.w_id = w_id;
  order.d_id = d_id;
  order.o_id = o_id;
  order.c_id = c_id;
  order.entry_d = now;
  order.ol_cnt = ol_cnt;
  order.all_local = std::all_of(lines.begin(), lines.end(),
                                [&](const Line& l) { return l.supply_w == w_id; });
  reg.create(order);
  reg.create(NewOrderRow{w_id, d_id, o_id});

  Money amount_sum = 0;
  std::int64_t line_no = 0;
  for (const Line& l : lines) {
    ++line_no;
    auto item = reg.try_read_item(l.i_id);
    if (!item) throw BusinessRollback("unused item id");

    Stock stock = reg.read_stock(l.supply_w, l.i_id);
    if (stock.quantity - l.quantity >= 10)
      stock.quantity -= l.quantity;
    else
      stock.quantity = stock.quantity - l.quantity + 91;
    stock.ytd += l.quantity;
    stock.order_cnt += 1;
    if (l.supply_w != w_id) stock.remote_cnt += 1;
    reg.update(stock);

    OrderLine ol;
    ol.w_id = w_id;
    ol.d_id = d_id;
    ol.o_id = o_id;
    ol.number = line_no;
    ol.i_id = l.i_id;
    ol.supply_w_id = l.supply_w;
    ol.quantity = l.quantity;
    ol.amount = l.quantity * item->price;
    ol.dist_info = stock.dist[static_cast<std::size_t>(d_id - 1)];
    reg.create(ol);
    amount_sum += ol.amount;
  }

  // total = sum(ol_amount) * (1 - c_discount) * (1 + w_tax + d_tax), all in
  // integer basis points; rounded down to cents.
  const Money total =
      amount_sum * (10000 - customer.discount_bp) *
      (10000 + warehouse.tax_bp + district.tax_bp) / 10000 / 10000;

  ChaincodeResult res;
  res.payload = join({kv("o_id", o_id), kv("ol_cnt", ol_cnt),
                      kv("total", format_money(total))});
  return res;
}

ChaincodeResult do_payment(EndorsementContext& ctx,
                           const std::vector<std::string>& args) {
  Args a(args);
  Registry reg(ctx);

  const std::int64_t w_id = a.next_i64();
  const std::int64_t d_id = a.next_i64();
  const std::int64_t c_w_id = a.next_i64();
  const std::int64_t c_d_id = a.next_i64();
  const std::string mode = a.next();
  const std::string cust = a.next();
  const Money amount = a.next_i64();
  const Time now = a.next_i64();
  const std::string client_id = a.next();

  Warehouse warehouse = reg.read_warehouse(w_id);
  warehouse.ytd += amount;
  reg.update(warehouse);

  District district = reg.read_district(w_id, d_id);
  district.ytd += amount;
  reg.update(district);

  Customer customer = resolve_customer(reg, c_w_id, c_d_id, mode, cust);
  customer.balance -= amount;
  customer.ytd_payment += amount;
  customer.payment_cnt += 1;
  if (customer.credit == "BC") {
    std::string info = std::to_string(customer.c_id) + "-" +
                       std::to_string(c_d_id) + "-" + std::to_string(c_w_id) +
                       "-" + std::to_string(d_id) + "-" + std::to_string(w_id) +
                       "-" + std::to_string(amount) + ";";
    customer.data = (info + customer.data).substr(0, 500);
  }
  reg.update(customer);

  History h;
  h.c_w_id = customer.w_id;
  h.c_d_id = customer.d_id;
  h.c_id = customer.c_id;
  h.w_id = w_id;
  h.d_id = d_id;
  h.date = now;
  h.amount = amount;
  h.data = warehouse.name + "    " + district.name;
  h.client_timestamp = now;
  h.client_id = client_id;
  reg.create(h);

  ChaincodeResult res;
  res.payload = join({kv("c_id", customer.c_id),
                      kv("balance", format_money(customer.balance))});
  return res;
}

ChaincodeResult do_order_status(EndorsementContext& ctx,
                                const std::vector<std::string>& args) {
  Args a(args);
  Registry reg(ctx);

  const std::int64_t w_id = a.next_i64();
  const std::int64_t d_id = a.next_i64();
  const std::string mode = a.next();
  const std::string cust = a.next();

  Customer customer = resolve_customer(reg, w_id, d_id, mode, cust);

  auto newest = reg.newest_orders(w_id, d_id, 1);
  ChaincodeResult res;
  if (newest.empty()) {
    res.payload = join({kv("c_id", customer.c_id), kv("orders", "none")});
    return res;
  }
  const Order& order = newest.front();
  const auto lines = reg.order_lines(w_id, d_id, order.o_id);
  res.payload = join({kv("c_id", customer.c_id), kv("o_id", order.o_id),
                      kv("carrier", order.carrier_id ? *order.carrier_id : 0),
                      kv("lines", static_cast<std::int64_t>(lines.size()))});
  return res;
}

ChaincodeResult do_delivery(EndorsementContext& ctx,
                            const std::vector<std::string>& args) {
  Args a(args);
  Registry reg(ctx);

  const std::int64_t w_id = a.next_i64();
  const std::int64_t carrier_id = a.next_i64();
  const Time now = a.next_i64();

  std::vector<std::string> delivered;
  std::vector<std::string> skipped;
  for (std::int64_t d_id = 1; d_id <= kDistrictsPerWarehouse; ++d_id) {
    auto oldest = reg.oldest_new_order(w_id, d_id);
    if (!oldest) {
      skipped.push_back(std::to_string(d_id));
      continue;
    }
    const std::int64_t o_id = oldest->o_id;
    reg.delete_new_order(w_id, d_id, o_id);

    Order order = reg.read_order(w_id, d_id, o_id);
    order.carrier_id = carrier_id;
    reg.update(order);

    Money amount_sum = 0;
    for (OrderLine line : reg.order_lines(w_id, d_id, o_id)) {
      line.delivery_d = now;
      reg.update(line);
      amount_sum += line.amount;
    }

    Customer customer = reg.read_customer(w_id, d_id, order.c_id);
    customer.balance += amount_sum;
    customer.delivery_cnt += 1;
    reg.update(customer);

    delivered.push_back(std::to_string(d_id) + ":" + std::to_string(o_id));
  }

  ChaincodeResult res;
  res.payload = join({kv("delivered", join(delivered)),
                      kv("skipped", join(skipped))});
  return res;
}

ChaincodeResult do_stock_level(EndorsementContext& ctx,
                               const std::vector<std::string>& args) {
  Args a(args);
  Registry reg(ctx);

  const std::int64_t w_id = a.next_i64();
  const std::int64_t d_id = a.next_i64();
  const std::int64_t threshold = a.next_i64();

  const District district = reg.read_district(w_id, d_id);
  const std::int64_t hi = district.next_o_id - 1;
  const std::int64_t lo = std::max<std::int64_t>(1, district.next_o_id - 20);

  std::set<std::int64_t> item_ids;
  if (hi >= lo)
    for (const auto& line : reg.order_lines_between(w_id, d_id, lo, hi))
      item_ids.insert(line.i_id);

  std::int64_t low_stock = 0;
  for (std::int64_t i_id : item_ids) {
    if (reg.read_stock(w_id, i_id).quantity < threshold) ++low_stock;
  }

  ChaincodeResult res;
  res.payload = join({kv("low_stock", low_stock)});
  return res;
}

std::string encode_load_entity(EntityType type, const std::string& record) {
  std::string out = entity_type_name(type);
  out.push_back(kLoadEntitySeparator);
  out += record;
  return out;
}

ChaincodeResult do_load_batch(EndorsementContext& ctx,
                              const std::vector<std::string>& args) {
  Args a(args);
  Registry reg(ctx);
  const std::int64_t n = a.next_i64();
  for (std::int64_t i = 0; i < n; ++i) {
    const std::string& arg = a.next();
    const std::size_t sep = arg.find(kLoadEntitySeparator);
    if (sep == std::string::npos)
      throw std::invalid_argument("malformed load entity");
    const std::string type = arg.substr(0, sep);
    const std::string record = arg.substr(sep + 1);
    if (type == "WAREHOUSE")
      reg.create(decode_warehouse(record));
    else if (type == "DISTRICT")
      reg.create(decode_district(record));
    else if (type == "CUSTOMER")
      reg.create(decode_customer(record));
    else if (type == "HISTORY")
      reg.create(decode_history(record));
    else if (type == "ITEM")
      reg.create(decode_item(record));
    else if (type == "STOCK")
      reg.create(decode_stock(record));
    else if (type == "ORDER")
      reg.create(decode_order(record));
    else if (type == "NEW_ORDER")
      reg.create(decode_new_order_row(record));
    else if (type == "ORDER_LINE")
      reg.create(decode_order_line(record));
    else
      throw std::invalid_argument("unknown load entity type: " + type);
  }
  ChaincodeResult res;
  res.payload = kv("loaded", n);
  return res;
}

}  // namespace tpcc
