#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "gelab/exchange/types.hpp"
#include "gelab/panel.hpp"

namespace gelab::exchange {

/// Per-item volume-weighted mean execution price and total units for trades dated `date`.
/// Items without trades that day are omitted. Output is sorted by item id.
std::vector<PanelObservation> daily_summary(std::span<const Trade> trade_log, Date date);

/// `date,seq,item_id,qty,price,buyer_id,seller_id,refund,tax`
void write_trade_log_csv(std::ostream& os, std::span<const Trade> trades);
/// `date,item_id,qty,price_paid`
void write_removal_log_csv(std::ostream& os, std::span<const Removal> removals);

}  // namespace gelab::exchange
