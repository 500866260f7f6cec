#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tpcc/domain.hpp"
#include "tpcc/keys.hpp"
#include "tpcc/ledger.hpp"

namespace tpcc {

// Asset-registry layer: CRUD by entity type over an endorsement context.
// Stateless facade; every access lands in the ambient read-write set.
class Registry {
 public:
  explicit Registry(EndorsementContext& ctx) : ctx_(ctx) {}

  // Generic operations. create throws AlreadyExistsError, read NotFoundError.
  void create_raw(const std::string& key, std::string value);
  std::string read_raw(const std::string& key) const;
  void update_raw(const std::string& key, std::string value);

  void create(const Warehouse& w);
  void create(const District& d);
  void create(const Customer& c);  // also writes the last-name index key
  void create(const History& h);
  void create(const Item& i);
  void create(const Stock& s);
  void create(const Order& o);
  void create(const NewOrderRow& n);
  void create(const OrderLine& l);

  Warehouse read_warehouse(std::int64_t w) const;
  District read_district(std::int64_t w, std::int64_t d) const;
  Customer read_customer(std::int64_t w, std::int64_t d,
                         std::int64_t c) const;
  std::optional<Item> try_read_item(std::int64_t i) const;
  Stock read_stock(std::int64_t w, std::int64_t i) const;
  Order read_order(std::int64_t w, std::int64_t d, std::int64_t o) const;

  void update(const Warehouse& w);
  void update(const District& d);
  void update(const Customer& c);
  void update(const Stock& s);
  void update(const Order& o);
  void update(const OrderLine& l);

  // Customers sharing a last name, ordered by c_id; resolved through the
  // primary key via the secondary index.
  std::vector<Customer> customers_by_last_name(std::int64_t w, std::int64_t d,
                                               const std::string& last) const;

  // Orders newest-first; relies on the flipped-id key encoding.
  std::vector<Order> newest_orders(std::int64_t w, std::int64_t d,
                                   std::size_t limit) const;

  // Oldest undelivered order of a district (limit-1 scan of plain-id keys).
  std::optional<NewOrderRow> oldest_new_order(std::int64_t w,
                                              std::int64_t d) const;
  void delete_new_order(std::int64_t w, std::int64_t d, std::int64_t o);

  std::vector<OrderLine> order_lines(std::int64_t w, std::int64_t d,
                                     std::int64_t o) const;
  // Lines of all orders with o_lo <= o_id <= o_hi, in one range scan.
  std::vector<OrderLine> order_lines_between(std::int64_t w, std::int64_t d,
                                             std::int64_t o_lo,
                                             std::int64_t o_hi) const;

 private:
  EndorsementContext& ctx_;
};

}  // namespace tpcc
