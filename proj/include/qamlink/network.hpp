#ifndef QAMLINK_NETWORK_HPP
#define QAMLINK_NETWORK_HPP

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qamlink/energy.hpp"
#include "qamlink/errors.hpp"

namespace qamlink {

/// Source and destination with relay_count equally spaced relays between.
struct LinearNetwork {
  double total_distance = 100.0; // m
  int relay_count = 9;

  static constexpr int kMaxExhaustiveRelays = 30;

  int node_count() const noexcept { return relay_count + 2; }
  double spacing() const noexcept { return total_distance / (relay_count + 1); }
  /// Position of node k, 0 = source, relay_count + 1 = destination.
  double position(int k) const noexcept {
    return k == relay_count + 1 ? total_distance
                                : total_distance * k / (relay_count + 1);
  }

  void validate() const {
    if (!(total_distance > 0.0))
      throw DomainError("total_distance must be positive");
    if (relay_count < 0 || relay_count > 62)
      throw DomainError("relay_count must lie in [0, 62]");
  }
};

/// Bit i set means relay i (node i + 1) forwards the packet.
struct Route {
  std::uint64_t active_mask = 0;

  friend bool operator==(const Route&, const Route&) = default;
};

struct RouteResult {
  Route route;
  double total_energy_per_bit = 0.0;
  double total_delay = 0.0;
  std::vector<LinkMetrics> per_hop;
};

enum class Objective { energy, delay };

/// Relative gap under which two route costs are treated as equal; the
/// smaller mask then wins. Hop sums taken in different orders differ by
/// a few ulps.
inline constexpr double kTieRelTol = 1e-12;

namespace detail {
inline void check_route(const Route& route, const LinearNetwork& net) {
  if (net.relay_count < 64 && (route.active_mask >> net.relay_count) != 0)
    throw DomainError("route mask has bits beyond relay_count");
}
} // namespace detail

/// Active node indices along the route, source and destination included.
inline std::vector<int> route_nodes(const Route& route, const LinearNetwork& net) {
  detail::check_route(route, net);
  std::vector<int> nodes{0};
  for (int i = 0; i < net.relay_count; ++i)
    if ((route.active_mask >> i) & 1U)
      nodes.push_back(i + 1);
  nodes.push_back(net.relay_count + 1);
  return nodes;
}

/// Distances of consecutive hops.
inline std::vector<double> route_hops(const Route& route, const LinearNetwork& net) {
  const auto nodes = route_nodes(route, net);
  std::vector<double> hops;
  hops.reserve(nodes.size() - 1);
  for (std::size_t i = 1; i < nodes.size(); ++i)
    hops.push_back(net.position(nodes[i]) - net.position(nodes[i - 1]));
  return hops;
}

/// N-character 0/1 string, relay 0 first.
inline std::string mask_string(const Route& route, const LinearNetwork& net) {
  std::string s(static_cast<std::size_t>(net.relay_count), '0');
  for (int i = 0; i < net.relay_count; ++i)
    if ((route.active_mask >> i) & 1U)
      s[static_cast<std::size_t>(i)] = '1';
  return s;
}

/// Link metrics for every possible hop span on the line.
///
/// On an equally spaced line a hop is determined by how many node spacings
/// it covers, so only relay_count + 1 distinct links exist. Built once and
/// read-only afterwards. Hops that are always in outage get infinite cost.
class HopTable {
public:
  HopTable(const LinearNetwork& net, const PowerPolicy& policy,
           const ModulationScheme& scheme, double gamma_b_bar,
           const CircuitProfile& circuit, const RadioConfig& radio,
           const PropagationParams& prop)
      : net_(net) {
    net.validate();
    links_.reserve(static_cast<std::size_t>(net.relay_count) + 1);
    for (int span = 1; span <= net.relay_count + 1; ++span) {
      const double d = span == net.relay_count + 1 ? net.total_distance
                                                   : net.position(span);
      try {
        links_.push_back(link_metrics_at(d, policy, scheme, gamma_b_bar, circuit, radio, prop));
      } catch (const CertainOutage&) {
        links_.push_back(unreachable());
      }
    }
  }

  const LinkMetrics& span(int nodes_covered) const {
    return links_.at(static_cast<std::size_t>(nodes_covered - 1));
  }

  double cost(int nodes_covered, Objective objective) const {
    const auto& m = span(nodes_covered);
    return objective == Objective::energy ? m.energy_per_bit : m.delay;
  }

  const LinearNetwork& network() const noexcept { return net_; }

  RouteResult evaluate(const Route& route) const {
    const auto nodes = route_nodes(route, net_);
    RouteResult r;
    r.route = route;
    r.per_hop.reserve(nodes.size() - 1);
    for (std::size_t i = 1; i < nodes.size(); ++i) {
      const auto& m = span(nodes[i] - nodes[i - 1]);
      r.per_hop.push_back(m);
      r.total_energy_per_bit += m.energy_per_bit;
      r.total_delay += m.delay;
    }
    return r;
  }

  /// Objective value of a route, summed hop by hop in route order.
  double route_cost(std::uint64_t mask, Objective objective) const {
    double total = 0.0;
    int prev = 0;
    for (int i = 0; i < net_.relay_count; ++i) {
      if ((mask >> i) & 1U) {
        total += cost(i + 1 - prev, objective);
        prev = i + 1;
      }
    }
    return total + cost(net_.relay_count + 1 - prev, objective);
  }

private:
  static LinkMetrics unreachable() {
    LinkMetrics m;
    m.p_link = 1.0;
    m.energy_per_bit = std::numeric_limits<double>::infinity();
    m.delay = std::numeric_limits<double>::infinity();
    return m;
  }

  LinearNetwork net_;
  std::vector<LinkMetrics> links_;
};

/// Expected energy and delay of one route under hop-by-hop retransmission.
inline RouteResult route_cost(const Route& route, const LinearNetwork& net,
                              const PowerPolicy& policy, const ModulationScheme& scheme,
                              const BerTarget& target, const CircuitProfile& circuit,
                              const RadioConfig& radio, const PropagationParams& prop) {
  detail::check_route(route, net);
  const double gamma = required_gamma_b(target, scheme);
  RouteResult r;
  r.route = route;
  for (double d : route_hops(route, net)) {
    const auto m = link_metrics_at(d, policy, scheme, gamma, circuit, radio, prop);
    r.total_energy_per_bit += m.energy_per_bit;
    r.total_delay += m.delay;
    r.per_hop.push_back(m);
  }
  return r;
}

/// Exhaustive search over all 2^N relay subsets.
inline RouteResult optimal_route_exhaustive(const HopTable& table, Objective objective) {
  const auto& net = table.network();
  if (net.relay_count > LinearNetwork::kMaxExhaustiveRelays)
    throw DomainError("exhaustive route search supports at most 30 relays");
  const std::uint64_t count = std::uint64_t{1} << net.relay_count;

  double best = std::numeric_limits<double>::infinity();
  for (std::uint64_t mask = 0; mask < count; ++mask)
    best = std::min(best, table.route_cost(mask, objective));

  const double cutoff = best * (1.0 + kTieRelTol);
  for (std::uint64_t mask = 0; mask < count; ++mask)
    if (table.route_cost(mask, objective) <= cutoff)
      return table.evaluate(Route{mask});
  return table.evaluate(Route{0}); // unreachable for finite costs
}

/// Shortest path over node indices: best[j] = min_i best[i] + hop(j - i).
///
/// Among equal-cost predecessors the lowest node index is taken, which
/// reconstructs the numerically smallest optimal mask.
inline RouteResult optimal_route_dp(const HopTable& table, Objective objective) {
  const auto& net = table.network();
  const int last = net.relay_count + 1;
  std::vector<double> best(static_cast<std::size_t>(last) + 1,
                           std::numeric_limits<double>::infinity());
  best[0] = 0.0;
  for (int j = 1; j <= last; ++j)
    for (int i = 0; i < j; ++i)
      best[j] = std::min(best[j], best[i] + table.cost(j - i, objective));

  std::uint64_t mask = 0;
  int j = last;
  while (j > 0) {
    const double cutoff = best[j] * (1.0 + kTieRelTol);
    int pred = j - 1;
    for (int i = 0; i < j; ++i) {
      if (best[i] + table.cost(j - i, objective) <= cutoff) {
        pred = i;
        break;
      }
    }
    if (pred > 0)
      mask |= std::uint64_t{1} << (pred - 1);
    j = pred;
  }
  return table.evaluate(Route{mask});
}

/// Minimum-cost route by exhaustive enumeration of relay subsets.
inline RouteResult optimal_route(const LinearNetwork& net, const PowerPolicy& policy,
                                 const ModulationScheme& scheme, const BerTarget& target,
                                 const CircuitProfile& circuit, const RadioConfig& radio,
                                 const PropagationParams& prop,
                                 Objective objective = Objective::energy) {
  const HopTable table(net, policy, scheme, required_gamma_b(target, scheme), circuit, radio,
                       prop);
  return optimal_route_exhaustive(table, objective);
}

/// Same contract as optimal_route, solved by dynamic programming in O(N^2).
inline RouteResult optimal_route_dp(const LinearNetwork& net, const PowerPolicy& policy,
                                    const ModulationScheme& scheme, const BerTarget& target,
                                    const CircuitProfile& circuit, const RadioConfig& radio,
                                    const PropagationParams& prop,
                                    Objective objective = Objective::energy) {
  const HopTable table(net, policy, scheme, required_gamma_b(target, scheme), circuit, radio,
                       prop);
  return optimal_route_dp(table, objective);
}

struct JointOptimum {
  int b = 0;
  double pt_watts = 0.0;
  RouteResult result;
};

/// Global energy minimum over constellation size, fixed transmit power and
/// route. Ties resolve to the smallest b, then smallest P_t, then mask.
inline JointOptimum joint_optimize(const LinearNetwork& net, std::span<const double> pt_grid,
                                   std::span<const int> b_grid, const BerTarget& target,
                                   const CircuitProfile& circuit, const RadioConfig& radio,
                                   const PropagationParams& prop) {
  if (pt_grid.empty() || b_grid.empty())
    throw DomainError("joint_optimize: grids must be nonempty");
  std::vector<int> bs(b_grid.begin(), b_grid.end());
  std::vector<double> pts(pt_grid.begin(), pt_grid.end());
  std::ranges::sort(bs);
  std::ranges::sort(pts);

  std::optional<JointOptimum> best;
  for (int b : bs) {
    const ModulationScheme scheme(b);
    const double gamma = required_gamma_b(target, scheme);
    for (double pt : pts) {
      const HopTable table(net, FixedPower{pt}, scheme, gamma, circuit, radio, prop);
      auto r = optimal_route_exhaustive(table, Objective::energy);
      if (!best || r.total_energy_per_bit < best->result.total_energy_per_bit)
        best = JointOptimum{b, pt, std::move(r)};
    }
  }
  return *best;
}

} // namespace qamlink

#endif
