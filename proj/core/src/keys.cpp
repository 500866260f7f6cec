#include "tpcc/keys.hpp"

#include <algorithm>

namespace tpcc {

std::string pad_number(std::int64_t value, int width) {
  if (value < 0) throw EncodingError("pad_number: negative value");
  std::string digits = std::to_string(value);
  if (static_cast<int>(digits.size()) > width)
    throw EncodingError("pad_number: value " + digits +
                        " overflows pad width " + std::to_string(width));
  return std::string(static_cast<std::size_t>(width) - digits.size(), '0') +
         digits;
}

std::string CompositeKey::serialize() const {
  std::string out = type_prefix;
  for (const auto& p : parts) {
    out.push_back(kKeySeparator);
    out += p;
  }
  return out;
}

CompositeKey CompositeKey::parse(const std::string& serialized) {
  CompositeKey key;
  std::size_t pos = serialized.find(kKeySeparator);
  key.type_prefix = serialized.substr(0, pos);
  while (pos != std::string::npos) {
    const std::size_t next = serialized.find(kKeySeparator, pos + 1);
    key.parts.push_back(serialized.substr(
        pos + 1, next == std::string::npos ? next : next - pos - 1));
    pos = next;
  }
  return key;
}

CompositeKey make_key(std::string type_prefix, std::vector<std::string> parts) {
  return CompositeKey{std::move(type_prefix), std::move(parts)};
}

std::int64_t flip_order_id(std::int64_t o_id, int width) {
  std::int64_t max = 1;
  for (int i = 0; i < width; ++i) max *= 10;
  if (o_id < 1 || o_id >= max)
    throw EncodingError("flip_order_id: o_id out of range");
  return (max - 1) - o_id;
}

namespace keys {

namespace {
std::string join(const char* prefix, std::vector<std::string> parts) {
  return CompositeKey{prefix, std::move(parts)}.serialize();
}
}  // namespace

std::string warehouse(std::int64_t w) {
  return join(kWarehouse, {pad_number(w, kWarehousePad)});
}

std::string district(std::int64_t w, std::int64_t d) {
  return join(kDistrict,
              {pad_number(w, kWarehousePad), pad_number(d, kDistrictPad)});
}

std::string customer(std::int64_t w, std::int64_t d, std::int64_t c) {
  return join(kCustomer, {pad_number(w, kWarehousePad),
                          pad_number(d, kDistrictPad),
                          pad_number(c, kCustomerPad)});
}

std::string customer_last_name(std::int64_t w, std::int64_t d,
                               const std::string& c_last, std::int64_t c) {
  return join(kCustomerLastName,
              {pad_number(w, kWarehousePad), pad_number(d, kDistrictPad),
               c_last, pad_number(c, kCustomerPad)});
}

std::string history(std::int64_t w, std::int64_t d, std::int64_t c,
                    std::int64_t client_timestamp,
                    const std::string& client_id) {
  return join(kHistory,
              {pad_number(w, kWarehousePad), pad_number(d, kDistrictPad),
               pad_number(c, kCustomerPad),
               pad_number(client_timestamp, kTimestampPad), client_id});
}

std::string item(std::int64_t i) {
  return join(kItem, {pad_number(i, kItemPad)});
}

std::string stock(std::int64_t w, std::int64_t i) {
  return join(kStock,
              {pad_number(w, kWarehousePad), pad_number(i, kItemPad)});
}

std::string order(std::int64_t w, std::int64_t d, std::int64_t o) {
  return join(kOrder, {pad_number(w, kWarehousePad),
                       pad_number(d, kDistrictPad),
                       pad_number(flip_order_id(o, kOrderPad), kOrderPad)});
}

std::string new_order(std::int64_t w, std::int64_t d, std::int64_t o) {
  return join(kNewOrder, {pad_number(w, kWarehousePad),
                          pad_number(d, kDistrictPad),
                          pad_number(o, kOrderPad)});
}

std::string order_line(std::int64_t w, std::int64_t d, std::int64_t o,
                       std::int64_t line) {
  return join(kOrderLine,
              {pad_number(w, kWarehousePad), pad_number(d, kDistrictPad),
               pad_number(o, kOrderPad), pad_number(line, kLinePad)});
}

KeyRange prefix_range(const std::string& type_prefix,
                      const std::vector<std::string>& parts) {
  std::string start = type_prefix;
  for (const auto& p : parts) {
    start.push_back(kKeySeparator);
    start += p;
  }
  start.push_back(kKeySeparator);
  std::string end = start;
  // Components never contain bytes <= 0x1f, so bumping the separator bounds
  // every extension of the partial key.
  end.back() = kKeySeparator + 1;
  return {std::move(start), std::move(end)};
}

KeyRange type_range(const std::string& type_prefix) {
  std::string start = type_prefix;
  start.push_back(kKeySeparator);
  std::string end = start;
  end.back() = kKeySeparator + 1;
  return {std::move(start), std::move(end)};
}

}  // namespace keys
}  // namespace tpcc
