#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tpcc/rng.hpp"
#include "tpcc/time.hpp"

namespace tpcc {

// Currency is held as integer cents and rates as integer basis points so the
// world-state bytes stay deterministic and hashable.
using Money = std::int64_t;
using BasisPoints = std::int32_t;

std::string format_money(Money cents);

enum class Profile { NewOrder, Payment, OrderStatus, Delivery, StockLevel };

constexpr std::array<Profile, 5> kAllProfiles = {
    Profile::NewOrder, Profile::Payment, Profile::OrderStatus,
    Profile::Delivery, Profile::StockLevel};

const char* profile_name(Profile p);
std::optional<Profile> profile_from_name(const std::string& name);

// ---------------------------------------------------------------------------
// Entities

struct Warehouse {
  std::int64_t w_id = 0;
  std::string name, street_1, street_2, city, state, zip;
  BasisPoints tax_bp = 0;  // [0, 2000]
  Money ytd = 0;
};

struct District {
  std::int64_t w_id = 0, d_id = 0;
  std::string name, street_1, street_2, city, state, zip;
  BasisPoints tax_bp = 0;
  Money ytd = 0;
  std::int64_t next_o_id = 0;
};

struct Customer {
  std::int64_t w_id = 0, d_id = 0, c_id = 0;
  std::string first, middle, last;
  std::string street_1, street_2, city, state, zip, phone;
  Time since = 0;
  std::string credit;  // "GC" | "BC"
  Money credit_lim = 0;
  BasisPoints discount_bp = 0;  // [0, 5000]
  Money balance = 0;
  Money ytd_payment = 0;
  std::int64_t payment_cnt = 0;
  std::int64_t delivery_cnt = 0;
  std::string data;
};

struct History {
  std::int64_t c_w_id = 0, c_d_id = 0, c_id = 0;
  std::int64_t w_id = 0, d_id = 0;
  Time date = 0;
  Money amount = 0;
  std::string data;
  // Key components; the standard gives History no primary key.
  Time client_timestamp = 0;
  std::string client_id;
};

struct Item {
  std::int64_t i_id = 0;
  std::int64_t im_id = 0;
  std::string name;
  Money price = 0;
  std::string data;
};

struct Stock {
  std::int64_t w_id = 0, i_id = 0;
  std::int64_t quantity = 0;
  std::array<std::string, 10> dist;
  Money ytd = 0;
  std::int64_t order_cnt = 0;
  std::int64_t remote_cnt = 0;
  std::string data;
};

struct Order {
  std::int64_t w_id = 0, d_id = 0, o_id = 0, c_id = 0;
  Time entry_d = 0;
  std::optional<std::int64_t> carrier_id;
  std::int64_t ol_cnt = 0;  // [5, 15]
  bool all_local = true;
};

struct NewOrderRow {
  std::int64_t w_id = 0, d_id = 0, o_id = 0;
};

struct OrderLine {
  std::int64_t w_id = 0, d_id = 0, o_id = 0, number = 0;
  std::int64_t i_id = 0;
  std::int64_t supply_w_id = 0;
  std::optional<Time> delivery_d;
  std::int64_t quantity = 0;
  Money amount = 0;
  std::string dist_info;
};

// Canonical field-ordered record codec. encode/decode round-trip losslessly.
std::string encode(const Warehouse&);
std::string encode(const District&);
std::string encode(const Customer&);
std::string encode(const History&);
std::string encode(const Item&);
std::string encode(const Stock&);
std::string encode(const Order&);
std::string encode(const NewOrderRow&);
std::string encode(const OrderLine&);

Warehouse decode_warehouse(const std::string&);
District decode_district(const std::string&);
Customer decode_customer(const std::string&);
History decode_history(const std::string&);
Item decode_item(const std::string&);
Stock decode_stock(const std::string&);
Order decode_order(const std::string&);
NewOrderRow decode_new_order_row(const std::string&);
OrderLine decode_order_line(const std::string&);

// ---------------------------------------------------------------------------
// Population

enum class EntityType {
  Warehouse,
  District,
  Customer,
  History,
  Item,
  Stock,
  Order,
  NewOrder,
  OrderLine,
};

const char* entity_type_name(EntityType t);

// nurand constants, fixed per benchmark run and distributed by the harness
// prepare step.
struct NurandConstants {
  std::int64_t c_last = 0;  // [0, 255]
  std::int64_t c_id = 0;    // [0, 1023]
  std::int64_t ol_i = 0;    // [0, 8191]

  static NurandConstants derive(std::uint64_t seed);
};

constexpr int kDistrictsPerWarehouse = 10;
constexpr int kCustomersPerDistrict = 3000;
constexpr int kItemCount = 100000;
constexpr int kOrdersPerDistrict = 3000;
constexpr int kFirstUndeliveredOrder = 2101;
constexpr int kStockPerWarehouse = kItemCount;
constexpr std::int64_t kUnusedItemId = kItemCount + 1;

using EntitySink =
    std::function<void(EntityType, const std::string& record)>;

// Emits all entities at TPC-C cardinalities; a pure function of
// (seed, warehouse_count, constants).
void generate_initial_population(int warehouse_count, std::uint64_t seed,
                                 const NurandConstants& constants,
                                 const EntitySink& emit);

// ---------------------------------------------------------------------------
// Profile argument generation

// Contract-API argument record: positional strings. The submitting client
// appends [timestamp, client_id] before invocation.
struct ProfileInput {
  Profile profile = Profile::NewOrder;
  std::vector<std::string> args;
};

ProfileInput generate_profile_input(Profile profile, int warehouse_count,
                                    std::int64_t home_w, std::int64_t home_d,
                                    const NurandConstants& constants,
                                    Rng& rng);

}  // namespace tpcc
