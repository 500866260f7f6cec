#pragma once

#include <string>
#include <vector>

#include "tpcc/domain.hpp"
#include "tpcc/ledger.hpp"
#include "tpcc/registry.hpp"

namespace tpcc {

// Contract-API argument layouts. Every function receives its business
// arguments followed by [timestamp, client_id], appended by the submitting
// client:
//   NEW_ORDER    w d c ol_cnt (i_id supply_w qty){ol_cnt} ts client
//   PAYMENT      w d c_w c_d mode cust amount ts client     (mode: id|last)
//   ORDER_STATUS w d mode cust ts client
//   DELIVERY     w carrier ts client
//   STOCK_LEVEL  w d threshold ts client
//   LOAD_BATCH   n (type \x1e record){n} ts client
constexpr char kLoadEntitySeparator = '\x1e';

ChaincodeResult do_new_order(EndorsementContext& ctx,
                             const std::vector<std::string>& args);
ChaincodeResult do_payment(EndorsementContext& ctx,
                           const std::vector<std::string>& args);
ChaincodeResult do_order_status(EndorsementContext& ctx,
                                const std::vector<std::string>& args);
ChaincodeResult do_delivery(EndorsementContext& ctx,
                            const std::vector<std::string>& args);
ChaincodeResult do_stock_level(EndorsementContext& ctx,
                               const std::vector<std::string>& args);
ChaincodeResult do_load_batch(EndorsementContext& ctx,
                              const std::vector<std::string>& args);

std::string encode_load_entity(EntityType type, const std::string& record);

// Registers all functions on a chaincode host.
template <typename Host>
void register_tpcc_chaincode(Host& host) {
  host.register_chaincode("NEW_ORDER", do_new_order);
  host.register_chaincode("PAYMENT", do_payment);
  host.register_chaincode("ORDER_STATUS", do_order_status);
  host.register_chaincode("DELIVERY", do_delivery);
  host.register_chaincode("STOCK_LEVEL", do_stock_level);
  host.register_chaincode("LOAD_BATCH", do_load_batch);
}

}  // namespace tpcc
