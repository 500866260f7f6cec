#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace tpcc {

class EncodingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Separator between the type prefix and the key components. 0x1f sorts below
// every alphanumeric byte, so keys stay sharded by type and a partial key is
// a strict lexicographic prefix of all its extensions.
constexpr char kKeySeparator = '\x1f';

// Composite world-state key: a table-name prefix plus stringified, padded
// primary-key components. The serialized form orders keys of one type by the
// numeric order of their padded parts.
struct CompositeKey {
  std::string type_prefix;
  std::vector<std::string> parts;

  std::string serialize() const;
  static CompositeKey parse(const std::string& serialized);

  bool operator==(const CompositeKey&) const = default;
};

// Fixed-width zero-padded decimal rendering. Throws EncodingError when the
// value is negative or does not fit in `width` digits.
std::string pad_number(std::int64_t value, int width);

CompositeKey make_key(std::string type_prefix,
                      std::vector<std::string> parts);

// Monotonically decreasing order-id counterpart: (10^width - 1) - o_id.
// An involution; used only inside the Order key, never in stored values.
std::int64_t flip_order_id(std::int64_t o_id, int width);

namespace keys {

inline constexpr int kWarehousePad = 6;
inline constexpr int kDistrictPad = 2;
inline constexpr int kCustomerPad = 6;
inline constexpr int kOrderPad = 6;
inline constexpr int kItemPad = 6;
inline constexpr int kLinePad = 2;
inline constexpr int kTimestampPad = 16;

inline constexpr const char* kWarehouse = "WAREHOUSE";
inline constexpr const char* kDistrict = "DISTRICT";
inline constexpr const char* kCustomer = "CUSTOMER";
inline constexpr const char* kCustomerLastName = "CUSTOMER_LAST_NAME";
inline constexpr const char* kHistory = "HISTORY";
inline constexpr const char* kItem = "ITEM";
inline constexpr const char* kStock = "STOCK";
inline constexpr const char* kOrder = "ORDER";
inline constexpr const char* kNewOrder = "NEW_ORDER";
inline constexpr const char* kOrderLine = "ORDER_LINE";

std::string warehouse(std::int64_t w);
std::string district(std::int64_t w, std::int64_t d);
std::string customer(std::int64_t w, std::int64_t d, std::int64_t c);
// Secondary index; value-less, resolved through the primary key.
std::string customer_last_name(std::int64_t w, std::int64_t d,
                               const std::string& c_last, std::int64_t c);
std::string history(std::int64_t w, std::int64_t d, std::int64_t c,
                    std::int64_t client_timestamp,
                    const std::string& client_id);
std::string item(std::int64_t i);
std::string stock(std::int64_t w, std::int64_t i);
// Order keys carry the flipped id, so the newest order iterates first.
std::string order(std::int64_t w, std::int64_t d, std::int64_t o);
// NewOrder keys keep the plain id: oldest undelivered order iterates first.
std::string new_order(std::int64_t w, std::int64_t d, std::int64_t o);
std::string order_line(std::int64_t w, std::int64_t d, std::int64_t o,
                       std::int64_t line);

// Half-open [start, end) bounds covering every key extending the given
// partial key.
struct KeyRange {
  std::string start;
  std::string end;
};

KeyRange prefix_range(const std::string& type_prefix,
                      const std::vector<std::string>& parts);
KeyRange type_range(const std::string& type_prefix);

}  // namespace keys

}  // namespace tpcc
