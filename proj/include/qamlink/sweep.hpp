#ifndef QAMLINK_SWEEP_HPP
#define QAMLINK_SWEEP_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <exception>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "qamlink/energy.hpp"
#include "qamlink/network.hpp"

namespace qamlink {

enum class SweepKind { singlehop, multihop, joint };

/// Grid definition for one parameter study.
///
/// singlehop: b_grid x d_grid at ber_grid.front(), policy as given.
/// multihop:  ber_grid x b_grid, optimal route per point, policy as given.
/// joint:     ber_grid x b_grid x pt_grid, fixed power at each pt.
struct SweepPlan {
  SweepKind kind = SweepKind::singlehop;
  std::vector<int> b_grid{2, 4, 6, 8, 10};
  std::vector<double> d_grid{5, 25, 50, 75, 100}; // m
  std::vector<double> pt_grid;                     // W
  std::vector<double> ber_grid{1e-4};
  PowerPolicy policy = FixedPower{0.1};
  Objective objective = Objective::energy;
  unsigned threads = 0; // 0: hardware concurrency

  void validate() const {
    if (b_grid.empty() || ber_grid.empty())
      throw DomainError("sweep plan needs nonempty b_grid and ber_grid");
    if (kind == SweepKind::singlehop && d_grid.empty())
      throw DomainError("singlehop sweep needs a nonempty d_grid");
    if (kind == SweepKind::joint && pt_grid.empty())
      throw DomainError("joint sweep needs a nonempty pt_grid");
    for (int b : b_grid)
      ModulationScheme{b};
  }
};

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// One grid point. Coordinates that do not apply to a sweep kind stay NaN
/// (or empty); `error` is set for points that could not be evaluated.
struct SweepRow {
  std::string policy;
  double ber_target = kNaN;
  int b = 0;
  double d_m = kNaN;
  double pt_mw = kNaN;
  double pt_dbm = kNaN;
  double pmin_dbm = kNaN;
  double p_link = kNaN;
  double energy_j = kNaN;
  double energy_dbmj = kNaN;
  double delay_s = kNaN;
  std::string route_mask;
  int hops = 0;
  bool is_argmin = false;
  std::optional<std::string> error;

  bool ok() const noexcept { return !error.has_value(); }
};

inline const char* policy_name(const PowerPolicy& policy) {
  return is_variable(policy) ? "variable" : "fixed";
}

/// Runs fn(i) for i in [0, n) on up to `threads` workers. Results are written
/// by index so ordering never depends on scheduling.
template <typename Fn>
void parallel_for_index(std::size_t n, unsigned threads, Fn&& fn) {
  if (threads == 0)
    threads = std::max(1U, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i)
      fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> workers;
  workers.reserve(threads);
  for (unsigned t = 0; t < threads; ++t)
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++)
        fn(i);
    });
}

/// required_gamma_b for every (ber, b) pair, computed up front so workers
/// only read it.
class GammaCache {
public:
  GammaCache(const std::vector<double>& bers, const std::vector<int>& bs) {
    for (double pb : bers)
      for (int b : bs) {
        Entry e;
        try {
          e.gamma = required_gamma_b(BerTarget(pb), ModulationScheme(b));
        } catch (const std::exception& ex) {
          e.error = ex.what();
        }
        entries_.emplace(std::pair{pb, b}, std::move(e));
      }
  }

  /// Mean bit SNR, or throws the error recorded when it was computed.
  double get(double pb, int b) const {
    const auto& e = entries_.at({pb, b});
    if (e.error)
      throw InfeasibleTarget(*e.error);
    return *e.gamma;
  }

private:
  struct Entry {
    std::optional<double> gamma;
    std::optional<std::string> error;
  };
  std::map<std::pair<double, int>, Entry> entries_;
};

namespace detail {

template <typename T>
std::vector<T> sorted_unique(std::vector<T> v) {
  std::ranges::sort(v);
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

/// Flags the minimum-`value` row within each group of rows sharing `key`.
/// First row in canonical order wins ties.
template <typename Key, typename Value>
void flag_group_minima(std::vector<SweepRow>& rows, Key&& key, Value&& value) {
  std::map<decltype(key(rows.front())), std::size_t> best;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].ok())
      continue;
    const auto k = key(rows[i]);
    auto it = best.find(k);
    if (it == best.end() || value(rows[i]) < value(rows[it->second]))
      best[k] = i;
  }
  for (const auto& [k, i] : best)
    rows[i].is_argmin = true;
}

inline void fill_energy(SweepRow& row, double joules) {
  row.energy_j = joules;
  row.energy_dbmj = to_dbmj(joules);
}

} // namespace detail

/// Single-hop energy per bit over b_grid x d_grid; per-distance argmin flagged.
inline std::vector<SweepRow> run_singlehop(const SweepPlan& plan, const CircuitProfile& circuit,
                                           const RadioConfig& radio,
                                           const PropagationParams& prop) {
  plan.validate();
  const auto bs = detail::sorted_unique(plan.b_grid);
  const auto ds = detail::sorted_unique(plan.d_grid);
  const double pb = plan.ber_grid.front();
  const GammaCache gammas({pb}, bs);

  std::vector<SweepRow> rows(bs.size() * ds.size());
  parallel_for_index(rows.size(), plan.threads, [&](std::size_t i) {
    SweepRow& row = rows[i];
    row.policy = policy_name(plan.policy);
    row.ber_target = pb;
    row.b = bs[i / ds.size()];
    row.d_m = ds[i % ds.size()];
    try {
      const auto m = link_metrics_at(row.d_m, plan.policy, ModulationScheme(row.b),
                                     gammas.get(pb, row.b), circuit, radio, prop);
      row.pt_dbm = m.pt_dbm;
      row.pt_mw = dbm_to_watts(m.pt_dbm) * 1e3;
      row.pmin_dbm = m.pmin_dbm;
      row.p_link = m.p_link;
      detail::fill_energy(row, m.energy_per_bit);
      row.delay_s = m.delay;
      row.hops = 1;
    } catch (const std::exception& ex) {
      row.error = ex.what();
    }
  });
  detail::flag_group_minima(
      rows, [](const SweepRow& r) { return r.d_m; },
      [](const SweepRow& r) { return r.energy_j; });
  return rows;
}

namespace detail {
inline void fill_route(SweepRow& row, const RouteResult& r, const LinearNetwork& net) {
  if (!std::isfinite(r.total_energy_per_bit))
    throw CertainOutage("every route contains a hop that is always in outage");
  row.route_mask = mask_string(r.route, net);
  row.hops = static_cast<int>(r.per_hop.size());
  fill_energy(row, r.total_energy_per_bit);
  row.delay_s = r.total_delay;
}
} // namespace detail

/// Optimal-route energy and delay per (BER target, b); per-target argmin
/// over b flagged under the plan's objective.
inline std::vector<SweepRow> run_multihop(const SweepPlan& plan, const LinearNetwork& net,
                                          const CircuitProfile& circuit,
                                          const RadioConfig& radio,
                                          const PropagationParams& prop) {
  plan.validate();
  const auto bers = detail::sorted_unique(plan.ber_grid);
  const auto bs = detail::sorted_unique(plan.b_grid);
  const GammaCache gammas(bers, bs);

  std::vector<SweepRow> rows(bers.size() * bs.size());
  parallel_for_index(rows.size(), plan.threads, [&](std::size_t i) {
    SweepRow& row = rows[i];
    row.policy = policy_name(plan.policy);
    row.ber_target = bers[i / bs.size()];
    row.b = bs[i % bs.size()];
    if (const auto* fixed = std::get_if<FixedPower>(&plan.policy))
      row.pt_mw = fixed->pt_watts * 1e3;
    try {
      const HopTable table(net, plan.policy, ModulationScheme(row.b),
                           gammas.get(row.ber_target, row.b), circuit, radio, prop);
      detail::fill_route(row, optimal_route_exhaustive(table, plan.objective), net);
    } catch (const std::exception& ex) {
      row.error = ex.what();
    }
  });
  const bool by_energy = plan.objective == Objective::energy;
  detail::flag_group_minima(
      rows, [](const SweepRow& r) { return r.ber_target; },
      [by_energy](const SweepRow& r) { return by_energy ? r.energy_j : r.delay_s; });
  return rows;
}

/// Optimal-route energy over b_grid x pt_grid per BER target; the global
/// minimum of each target is flagged.
inline std::vector<SweepRow> run_joint(const SweepPlan& plan, const LinearNetwork& net,
                                       const CircuitProfile& circuit, const RadioConfig& radio,
                                       const PropagationParams& prop) {
  plan.validate();
  const auto bers = detail::sorted_unique(plan.ber_grid);
  const auto bs = detail::sorted_unique(plan.b_grid);
  const auto pts = detail::sorted_unique(plan.pt_grid);
  const GammaCache gammas(bers, bs);

  const std::size_t per_ber = bs.size() * pts.size();
  std::vector<SweepRow> rows(bers.size() * per_ber);
  parallel_for_index(rows.size(), plan.threads, [&](std::size_t i) {
    SweepRow& row = rows[i];
    row.policy = "fixed";
    row.ber_target = bers[i / per_ber];
    row.b = bs[(i % per_ber) / pts.size()];
    const double pt = pts[i % pts.size()];
    row.pt_mw = pt * 1e3;
    row.pt_dbm = watts_to_dbm(pt);
    try {
      const HopTable table(net, FixedPower{pt}, ModulationScheme(row.b),
                           gammas.get(row.ber_target, row.b), circuit, radio, prop);
      detail::fill_route(row, optimal_route_exhaustive(table, Objective::energy), net);
    } catch (const std::exception& ex) {
      row.error = ex.what();
    }
  });
  detail::flag_group_minima(
      rows, [](const SweepRow& r) { return r.ber_target; },
      [](const SweepRow& r) { return r.energy_j; });
  return rows;
}

/// Flagged rows, in canonical order.
inline std::vector<SweepRow> argmin_rows(const std::vector<SweepRow>& rows) {
  std::vector<SweepRow> out;
  std::ranges::copy_if(rows, std::back_inserter(out),
                       [](const SweepRow& r) { return r.is_argmin; });
  return out;
}

} // namespace qamlink

#endif
