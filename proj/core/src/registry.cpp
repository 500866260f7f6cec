#include "tpcc/registry.hpp"

namespace tpcc {

void Registry::create_raw(const std::string& key, std::string value) {
  if (ctx_.get(key))
    throw AlreadyExistsError("create: key already exists: " + key);
  ctx_.put(key, std::move(value));
}

std::string Registry::read_raw(const std::string& key) const {
  auto v = ctx_.get(key);
  if (!v) throw NotFoundError("read: key not found: " + key);
  return std::move(*v);
}

void Registry::update_raw(const std::string& key, std::string value) {
  ctx_.put(key, std::move(value));
}

void Registry::create(const Warehouse& w) {
  create_raw(keys::warehouse(w.w_id), encode(w));
}

void Registry::create(const District& d) {
  create_raw(keys::district(d.w_id, d.d_id), encode(d));
}

void Registry::create(const Customer& c) {
  create_raw(keys::customer(c.w_id, c.d_id, c.c_id), encode(c));
  // Value-less utility key; the body lives only under the primary key.
  ctx_.put(keys::customer_last_name(c.w_id, c.d_id, c.last, c.c_id), "");
}

void Registry::create(const History& h) {
  create_raw(keys::history(h.c_w_id, h.c_d_id, h.c_id, h.client_timestamp,
                           h.client_id),
             encode(h));
}

void Registry::create(const Item& i) {
  create_raw(keys::item(i.i_id), encode(i));
}

void Registry::create(const Stock& s) {
  create_raw(keys::stock(s.w_id, s.i_id), encode(s));
}

void Registry::create(const Order& o) {
  create_raw(keys::order(o.w_id, o.d_id, o.o_id), encode(o));
}

void Registry::create(const NewOrderRow& n) {
  create_raw(keys::new_order(n.w_id, n.d_id, n.o_id), encode(n));
}

void Registry::create(const OrderLine& l) {
  create_raw(keys::order_line(l.w_id, l.d_id, l.o_id, l.number), encode(l));
}

Warehouse Registry::read_warehouse(std::int64_t w) const {
  return decode_warehouse(read_raw(keys::warehouse(w)));
}

District Registry::read_district(std::int64_t w, std::int64_t d) const {
  return decode_district(read_raw(keys::district(w, d)));
}

Customer Registry::read_customer(std::int64_t w, std::int64_t d,
                                 std::int64_t c) const {
  return decode_customer(read_raw(keys::customer(w, d, c)));
}

std::optional<Item> Registry::try_read_item(std::int64_t i) const {
  auto v = ctx_.get(keys::item(i));
  if (!v) return std::nullopt;
  return decode_item(*v);
}

Stock Registry::read_stock(std::int64_t w, std::int64_t i) const {
  return decode_stock(read_raw(keys::stock(w, i)));
}

Order Registry::read_order(std::int64_t w, std::int64_t d,
                           std::int64_t o) const {
  return decode_order(read_raw(keys::order(w, d, o)));
}

void Registry::update(const Warehouse& w) {
  update_raw(keys::warehouse(w.w_id), encode(w));
}

void Registry::update(const District& d) {
  update_raw(keys::district(d.w_id, d.d_id), encode(d));
}

void Registry::update(const Customer& c) {
  update_raw(keys::customer(c.w_id, c.d_id, c.c_id), encode(c));
}

void Registry::update(const Stock& s) {
  update_raw(keys::stock(s.w_id, s.i_id), encode(s));
}

void Registry::update(const Order& o) {
  update_raw(keys::order(o.w_id, o.d_id, o.o_id), encode(o));
}

void Registry::update(const OrderLine& l) {
  update_raw(keys::order_line(l.w_id, l.d_id, l.o_id, l.number), encode(l));
}

std::vector<Customer> Registry::customers_by_last_name(
    std::int64_t w, std::int64_t d, const std::string& last) const {
  const auto range = keys::prefix_range(
      keys::kCustomerLastName,
      {pad_number(w, keys::kWarehousePad), pad_number(d, keys::kDistrictPad),
       last});
  std::vector<Customer> out;
  for (const auto& [key, value] : ctx_.get_range(range.start, range.end)) {
    const CompositeKey parsed = CompositeKey::parse(key);
    const std::int64_t c_id = std::stoll(parsed.parts.back());
    out.push_back(read_customer(w, d, c_id));
  }
  return out;
}

std::vector<Order> Registry::newest_orders(std::int64_t w, std::int64_t d,
                                           std::size_t limit) const {
  const auto range = keys::prefix_range(
      keys::kOrder,
      {pad_number(w, keys::kWarehousePad), pad_number(d, keys::kDistrictPad)});
  std::vector<Order> out;
  for (const auto& [key, value] : ctx_.get_range(range.start, range.end, limit))
    out.push_back(decode_order(value));
  return out;
}

std::optional<NewOrderRow> Registry::oldest_new_order(std::int64_t w,
                                                      std::int64_t d) const {
  const auto range = keys::prefix_range(
      keys::kNewOrder,
      {pad_number(w, keys::kWarehousePad), pad_number(d, keys::kDistrictPad)});
  auto hits = ctx_.get_range(range.start, range.end, 1);
  if (hits.empty()) return std::nullopt;
  return decode_new_order_row(hits.front().second);
}

void Registry::delete_new_order(std::int64_t w, std::int64_t d,
                                std::int64_t o) {
  ctx_.del(keys::new_order(w, d, o));
}

std::vector<OrderLine> Registry::order_lines(std::int64_t w, std::int64_t d,
                                             std::int64_t o) const {
  const auto range = keys::prefix_range(
      keys::kOrderLine,
      {pad_number(w, keys::kWarehousePad), pad_number(d, keys::kDistrictPad),
       pad_number(o, keys::kOrderPad)});
  std::vector<OrderLine> out;
  for (const auto& [key, value] : ctx_.get_range(range.start, range.end))
    out.push_back(decode_order_line(value));
  return out;
}

std::vector<OrderLine> Registry::order_lines_between(std::int64_t w,
                                                     std::int64_t d,
                                                     std::int64_t o_lo,
                                                     std::int64_t o_hi) const {
  const auto base = keys::prefix_range(
      keys::kOrderLine,
      {pad_number(w, keys::kWarehousePad), pad_number(d, keys::kDistrictPad)});
  std::string start = base.start + pad_number(o_lo, keys::kOrderPad);
  start.push_back(kKeySeparator);
  std::string end = base.start + pad_number(o_hi, keys::kOrderPad);
  end.push_back(kKeySeparator + 1);
  std::vector<OrderLine> out;
  for (const auto& [key, value] : ctx_.get_range(start, end))
    out.push_back(decode_order_line(value));
  return out;
}

}  // namespace tpcc
