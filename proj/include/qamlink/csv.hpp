#ifndef QAMLINK_CSV_HPP
#define QAMLINK_CSV_HPP

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "qamlink/sweep.hpp"

namespace qamlink::csv {

/// 12 significant digits, "nan" for missing values.
inline std::string number(double v) {
  if (std::isnan(v))
    return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline const char* flag(bool v) { return v ? "1" : "0"; }

inline void write_singlehop(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "policy,b,d_m,pt_dbm,pmin_dbm,p_link,energy_j_per_bit,energy_dbmj,delay_s,is_argmin\n";
  for (const auto& r : rows)
    os << r.policy << ',' << r.b << ',' << number(r.d_m) << ',' << number(r.pt_dbm) << ','
       << number(r.pmin_dbm) << ',' << number(r.p_link) << ',' << number(r.energy_j) << ','
       << number(r.energy_dbmj) << ',' << number(r.delay_s) << ',' << flag(r.is_argmin)
       << '\n';
}

inline void write_multihop(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "policy,ber_target,b,pt_mw,route_mask,hops,energy_dbmj,delay_s,is_argmin\n";
  for (const auto& r : rows)
    os << r.policy << ',' << number(r.ber_target) << ',' << r.b << ',' << number(r.pt_mw)
       << ',' << r.route_mask << ',' << r.hops << ',' << number(r.energy_dbmj) << ','
       << number(r.delay_s) << ',' << flag(r.is_argmin) << '\n';
}

inline void write_joint(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "ber_target,b,pt_mw,route_mask,energy_dbmj,delay_s,is_global_min\n";
  for (const auto& r : rows)
    os << number(r.ber_target) << ',' << r.b << ',' << number(r.pt_mw) << ',' << r.route_mask
       << ',' << number(r.energy_dbmj) << ',' << number(r.delay_s) << ','
       << flag(r.is_argmin) << '\n';
}

} // namespace qamlink::csv

#endif
