#include "gelab/exchange/summary.hpp"

#include <map>
#include <ostream>

namespace gelab::exchange {

std::vector<PanelObservation> daily_summary(std::span<const Trade> trade_log, Date date) {
  struct Acc {
    long double notional = 0;
    std::int64_t quantity = 0;
  };
  std::map<ItemId, Acc> acc;
  for (const auto& t : trade_log) {
    if (t.date != date || t.quantity <= 0) continue;
    auto& a = acc[t.item];
    a.notional += static_cast<long double>(t.price) * static_cast<long double>(t.quantity);
    a.quantity += t.quantity;
  }
  std::vector<PanelObservation> out;
  out.reserve(acc.size());
  for (const auto& [item, a] : acc) {
    out.push_back(PanelObservation{item, date, static_cast<double>(a.notional / a.quantity),
                                   static_cast<double>(a.quantity)});
  }
  return out;
}

void write_trade_log_csv(std::ostream& os, std::span<const Trade> trades) {
  os << "date,seq,item_id,qty,price,buyer_id,seller_id,refund,tax\n";
  for (const auto& t : trades) {
    os << format_date(t.date) << ',' << t.seq << ',' << t.item.value << ',' << t.quantity << ','
       << t.price << ',' << t.buyer.value << ',' << t.seller.value << ',' << t.buyer_refund << ','
       << t.tax_paid << '\n';
  }
}

void write_removal_log_csv(std::ostream& os, std::span<const Removal> removals) {
  os << "date,item_id,qty,price_paid\n";
  for (const auto& r : removals) {
    os << format_date(r.date) << ',' << r.item.value << ',' << r.quantity << ',' << r.price_paid
       << '\n';
  }
}

}  // namespace gelab::exchange
