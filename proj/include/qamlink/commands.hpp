#ifndef QAMLINK_COMMANDS_HPP
#define QAMLINK_COMMANDS_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "qamlink/channel.hpp"
#include "qamlink/config.hpp"
#include "qamlink/csv.hpp"
#include "qamlink/energy.hpp"
#include "qamlink/sweep.hpp"

namespace qamlink {

/// Process exit statuses of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitConfigError = 1,
  kExitInfeasible = 2,
  kExitValidationFailed = 3,
};

namespace cmd_detail {

inline std::string fmt(double v, int digits = 6) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

inline SweepPlan base_plan(const RunConfig& cfg, SweepKind kind) {
  SweepPlan plan;
  plan.kind = kind;
  plan.b_grid = cfg.b_grid;
  plan.d_grid = cfg.d_grid_m;
  for (double mw : cfg.pt_grid_mw)
    plan.pt_grid.push_back(mw * 1e-3);
  plan.policy = cfg.power_policy();
  plan.objective = cfg.route_objective();
  plan.threads = static_cast<unsigned>(cfg.threads);
  return plan;
}

/// Writes the CSV and reports infeasible rows. Returns kExitInfeasible when
/// no row could be evaluated.
template <typename Writer>
int emit(const RunConfig& cfg, const std::string& default_name,
         const std::vector<SweepRow>& rows, Writer&& write, std::ostream& err) {
  const std::string path = cfg.output_path.empty() ? default_name : cfg.output_path;
  std::ofstream file(path);
  if (!file) {
    err << "error: cannot open output file '" << path << "'\n";
    return kExitConfigError;
  }
  write(file, rows);
  file.close();
  if (!file) {
    err << "error: failed writing '" << path << "'\n";
    return kExitConfigError;
  }

  std::size_t failed = 0;
  for (const auto& r : rows)
    if (!r.ok()) {
      ++failed;
      err << "warning: b=" << r.b << " ber_target=" << fmt(r.ber_target) << ": " << *r.error
          << '\n';
    }
  if (failed == rows.size()) {
    err << "error: every grid point was infeasible\n";
    return kExitInfeasible;
  }
  return kExitOk;
}

} // namespace cmd_detail

/// Single-hop energy over b x d. Prints one argmin line per distance.
inline int cmd_singlehop(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  using cmd_detail::fmt;
  auto plan = cmd_detail::base_plan(cfg, SweepKind::singlehop);
  plan.ber_grid = {cfg.ber_target};
  const auto rows = run_singlehop(plan, cfg.circuit(), cfg.radio(), cfg.propagation());
  const int rc = cmd_detail::emit(cfg, "singlehop.csv", rows, csv::write_singlehop, err);
  if (rc != kExitOk)
    return rc;
  auto best = argmin_rows(rows);
  std::ranges::stable_sort(best, {}, &SweepRow::d_m);
  for (const auto& r : best)
    out << "policy=" << r.policy << " d_m=" << fmt(r.d_m) << " b=" << r.b
        << " energy_dbmj=" << fmt(r.energy_dbmj, 4) << " delay_s=" << fmt(r.delay_s) << '\n';
  return kExitOk;
}

/// Optimal-route energy per (BER target, b). Prints one argmin line per target.
inline int cmd_multihop(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  using cmd_detail::fmt;
  auto plan = cmd_detail::base_plan(cfg, SweepKind::multihop);
  plan.ber_grid = cfg.ber_grid;
  const auto rows =
      run_multihop(plan, cfg.network(), cfg.circuit(), cfg.radio(), cfg.propagation());
  const int rc = cmd_detail::emit(cfg, "multihop.csv", rows, csv::write_multihop, err);
  if (rc != kExitOk)
    return rc;
  for (const auto& r : argmin_rows(rows))
    out << "policy=" << r.policy << " objective=" << cfg.objective
        << " ber_target=" << fmt(r.ber_target) << " b=" << r.b << " route=" << r.route_mask
        << " energy_dbmj=" << fmt(r.energy_dbmj, 4) << " delay_s=" << fmt(r.delay_s) << '\n';
  return kExitOk;
}

/// Energy surface over b x P_t at ber_target. Prints the global minimum.
inline int cmd_joint(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  using cmd_detail::fmt;
  auto plan = cmd_detail::base_plan(cfg, SweepKind::joint);
  plan.ber_grid = {cfg.ber_target};
  plan.policy = FixedPower{};
  const auto rows =
      run_joint(plan, cfg.network(), cfg.circuit(), cfg.radio(), cfg.propagation());
  const int rc = cmd_detail::emit(cfg, "joint.csv", rows, csv::write_joint, err);
  if (rc != kExitOk)
    return rc;
  for (const auto& r : argmin_rows(rows))
    out << "b=" << r.b << " pt_mw=" << fmt(r.pt_mw) << " energy_dbmj=" << fmt(r.energy_dbmj, 4)
        << " delay_s=" << fmt(r.delay_s) << " route=" << r.route_mask << '\n';
  return kExitOk;
}

/// Monte-Carlo check of analytic outage and HHR attempt counts for every
/// (d, b) link of the configured single-hop grid.
///
/// Pass requires the empirical outage within 4 binomial standard errors
/// and the mean attempt count within 4 standard errors of 1/(1 - p).
inline int cmd_validate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  using cmd_detail::fmt;
  if (cfg.trials < 10000) {
    err << "error: 'trials' must be >= 10000 for validation\n";
    return kExitConfigError;
  }
  const auto prop = cfg.propagation();
  const auto policy = cfg.power_policy();
  const BerTarget target(cfg.ber_target);

  struct Item {
    double d;
    int b;
    std::string line;
    bool pass = false;
    std::string error;
  };
  std::vector<Item> items;
  for (double d : cfg.d_grid_m)
    for (int b : cfg.b_grid)
      items.push_back({d, b, {}, false, {}});

  parallel_for_index(items.size(), static_cast<unsigned>(cfg.threads), [&](std::size_t i) {
    Item& it = items[i];
    try {
      const ModulationScheme scheme(it.b);
      const auto m = link_metrics(it.d, policy, scheme, target, cfg.circuit(), cfg.radio(), prop);
      const ShadowedLink link{it.d, m.pt_dbm, m.pmin_dbm};
      const double p = m.p_link;
      const auto mc = monte_carlo_outage(link, prop, cfg.trials, split_seed(cfg.seed, i));
      const double n = static_cast<double>(cfg.trials);
      const double p_bound = 4.0 * std::sqrt(p * (1.0 - p) / n);
      const double expected_tx = 1.0 / (1.0 - p);
      const double tx_bound = 4.0 * std::sqrt(p) / ((1.0 - p) * std::sqrt(n));
      const bool p_ok = std::abs(mc.empirical_probability - p) <= p_bound;
      const bool tx_ok = std::abs(mc.mean_transmission_count - expected_tx) <= tx_bound;
      it.pass = p_ok && tx_ok;
      std::ostringstream os;
      os << "d_m=" << fmt(it.d) << " b=" << it.b << " p_analytic=" << fmt(p, 8)
         << " p_empirical=" << fmt(mc.empirical_probability, 8) << " bound=" << fmt(p_bound, 4)
         << " mean_tx=" << fmt(mc.mean_transmission_count, 8)
         << " expected_tx=" << fmt(expected_tx, 8) << (it.pass ? " PASS" : " FAIL");
      it.line = os.str();
    } catch (const std::exception& ex) {
      it.error = ex.what();
      it.line = "d_m=" + fmt(it.d) + " b=" + std::to_string(it.b) + " ERROR " + it.error;
    }
  });

  std::ostringstream report;
  report << "validate policy=" << cfg.policy << " ber_target=" << fmt(cfg.ber_target)
         << " trials=" << cfg.trials << " seed=" << cfg.seed << '\n';
  std::size_t failures = 0;
  for (const auto& it : items) {
    report << it.line << '\n';
    if (!it.pass)
      ++failures;
  }
  report << (failures == 0 ? "all links PASS" : std::to_string(failures) + " link(s) FAIL")
         << '\n';

  out << report.str();
  if (!cfg.output_path.empty()) {
    std::ofstream file(cfg.output_path);
    if (!(file << report.str())) {
      err << "error: cannot write '" << cfg.output_path << "'\n";
      return kExitConfigError;
    }
  }
  return failures == 0 ? kExitOk : kExitValidationFailed;
}

} // namespace qamlink

#endif
