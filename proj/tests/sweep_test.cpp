#include <cmath>
#include <map>
#include <sstream>

#include <gtest/gtest.h>

#include "qamlink/csv.hpp"
#include "qamlink/sweep.hpp"

using namespace qamlink;

namespace {

const CircuitProfile kCircuit{};
const RadioConfig kRadio{};
const PropagationParams kProp{};
const LinearNetwork kNet{};

SweepPlan singlehop_plan(PowerPolicy policy) {
  SweepPlan p;
  p.kind = SweepKind::singlehop;
  p.policy = policy;
  return p;
}

const SweepRow& find_row(const std::vector<SweepRow>& rows, int b, double d) {
  for (const auto& r : rows)
    if (r.b == b && r.d_m == d)
      return r;
  throw std::runtime_error("row not found");
}

// Brute-force rescan: argmin per key must be the flagged row.
template <typename Key, typename Value>
void expect_flags_match_rescan(const std::vector<SweepRow>& rows, Key key, Value value) {
  std::map<double, double> best;
  for (const auto& r : rows)
    if (r.ok()) {
      auto [it, fresh] = best.emplace(key(r), value(r));
      if (!fresh && value(r) < it->second)
        it->second = value(r);
    }
  std::map<double, int> flagged;
  for (const auto& r : rows)
    if (r.is_argmin) {
      ++flagged[key(r)];
      EXPECT_EQ(value(r), best.at(key(r)));
    }
  for (const auto& [k, n] : flagged)
    EXPECT_EQ(n, 1) << k;
  EXPECT_EQ(flagged.size(), best.size());
}

} // namespace

TEST(SingleHopSweep, FixedPowerArgmins) {
  const auto rows = run_singlehop(singlehop_plan(FixedPower{0.1}), kCircuit, kRadio, kProp);
  ASSERT_EQ(rows.size(), 25U);
  std::map<double, int> argmin;
  for (const auto& r : argmin_rows(rows))
    argmin[r.d_m] = r.b;
  EXPECT_EQ(argmin.at(50.0), 8);
  EXPECT_EQ(argmin.at(75.0), 6);
  expect_flags_match_rescan(rows, [](const SweepRow& r) { return r.d_m; },
                            [](const SweepRow& r) { return r.energy_j; });
}

TEST(SingleHopSweep, VariablePowerIsHalfOutageAndCheaper) {
  const auto fixed = run_singlehop(singlehop_plan(FixedPower{0.1}), kCircuit, kRadio, kProp);
  const auto variable = run_singlehop(singlehop_plan(VariablePower{}), kCircuit, kRadio, kProp);
  for (const auto& r : variable) {
    EXPECT_EQ(r.p_link, 0.5);
    EXPECT_EQ(r.policy, "variable");
  }
  for (const auto& f : argmin_rows(fixed))
    EXPECT_LE(find_row(variable, f.b, f.d_m).energy_j, f.energy_j);
}

TEST(SingleHopSweep, DbmjColumnConsistent) {
  const auto rows = run_singlehop(singlehop_plan(FixedPower{0.05}), kCircuit, kRadio, kProp);
  for (const auto& r : rows)
    EXPECT_NEAR(r.energy_dbmj, 10.0 * std::log10(r.energy_j / 1e-3), 1e-9);
}

TEST(SingleHopSweep, CanonicalOrderIndependentOfThreadsAndInputOrder) {
  auto plan = singlehop_plan(FixedPower{0.1});
  plan.threads = 1;
  const auto serial = run_singlehop(plan, kCircuit, kRadio, kProp);
  plan.threads = 8;
  plan.b_grid = {10, 2, 8, 4, 6};
  plan.d_grid = {100, 5, 75, 25, 50};
  const auto parallel = run_singlehop(plan, kCircuit, kRadio, kProp);
  std::ostringstream a, b;
  csv::write_singlehop(a, serial);
  csv::write_singlehop(b, parallel);
  EXPECT_EQ(a.str(), b.str());
}

TEST(SingleHopSweep, InfeasibleTargetBecomesErrorRow) {
  auto plan = singlehop_plan(FixedPower{0.1});
  plan.ber_grid = {0.2}; // above the b >= 6 ceilings
  const auto rows = run_singlehop(plan, kCircuit, kRadio, kProp);
  int failed = 0;
  for (const auto& r : rows) {
    if (r.b >= 6) {
      EXPECT_FALSE(r.ok());
      EXPECT_FALSE(r.is_argmin);
      ++failed;
    } else {
      EXPECT_TRUE(r.ok()) << r.b;
    }
  }
  EXPECT_EQ(failed, 15);
}

TEST(MultiHopSweep, FixedPowerEnergyAndDelayCoincide) {
  SweepPlan plan;
  plan.kind = SweepKind::multihop;
  plan.ber_grid = {1e-4, 3e-4, 5e-4, 8e-4, 1e-3};
  const auto rows = run_multihop(plan, kNet, kCircuit, kRadio, kProp);
  ASSERT_EQ(rows.size(), 25U);
  std::map<double, double> min_delay;
  for (const auto& r : rows) {
    auto [it, fresh] = min_delay.emplace(r.ber_target, r.delay_s);
    if (!fresh)
      it->second = std::min(it->second, r.delay_s);
  }
  for (const auto& r : argmin_rows(rows))
    EXPECT_EQ(r.delay_s, min_delay.at(r.ber_target)) << r.ber_target;
  expect_flags_match_rescan(rows, [](const SweepRow& r) { return r.ber_target; },
                            [](const SweepRow& r) { return r.energy_j; });
}

TEST(MultiHopSweep, StricterTargetNeedsMoreEnergy) {
  SweepPlan plan;
  plan.kind = SweepKind::multihop;
  plan.ber_grid = {1e-4, 3e-4, 5e-4, 8e-4, 1e-3};
  for (PowerPolicy policy : {PowerPolicy{FixedPower{0.1}}, PowerPolicy{VariablePower{}}}) {
    plan.policy = policy;
    const auto best = argmin_rows(run_multihop(plan, kNet, kCircuit, kRadio, kProp));
    ASSERT_EQ(best.size(), 5U);
    for (std::size_t i = 1; i < best.size(); ++i)
      EXPECT_LE(best[i].energy_j, best[i - 1].energy_j);
  }
}

TEST(MultiHopSweep, DelayObjectiveKeepsEnergyColumn) {
  SweepPlan plan;
  plan.kind = SweepKind::multihop;
  plan.objective = Objective::delay;
  const auto by_delay = run_multihop(plan, kNet, kCircuit, kRadio, kProp);
  plan.objective = Objective::energy;
  const auto by_energy = run_multihop(plan, kNet, kCircuit, kRadio, kProp);
  ASSERT_EQ(by_delay.size(), by_energy.size());
  for (std::size_t i = 0; i < by_delay.size(); ++i) {
    EXPECT_TRUE(std::isfinite(by_delay[i].energy_dbmj));
    EXPECT_LE(by_delay[i].delay_s, by_energy[i].delay_s);
    EXPECT_GE(by_delay[i].energy_j, by_energy[i].energy_j);
  }
  expect_flags_match_rescan(by_delay, [](const SweepRow& r) { return r.ber_target; },
                            [](const SweepRow& r) { return r.delay_s; });
}

TEST(JointSweep, SinglePointIsArgmin) {
  SweepPlan plan;
  plan.kind = SweepKind::joint;
  plan.b_grid = {6};
  plan.pt_grid = {0.04};
  const auto rows = run_joint(plan, kNet, kCircuit, kRadio, kProp);
  ASSERT_EQ(rows.size(), 1U);
  EXPECT_TRUE(rows[0].is_argmin);
}

TEST(JointSweep, ExcludingArgminRaisesMinimum) {
  SweepPlan plan;
  plan.kind = SweepKind::joint;
  plan.b_grid = {2, 4, 6};
  plan.pt_grid = {0.01, 0.025, 0.05, 0.1};
  const auto full = argmin_rows(run_joint(plan, kNet, kCircuit, kRadio, kProp));
  ASSERT_EQ(full.size(), 1U);
  // drop the winning power from the grid
  std::erase_if(plan.pt_grid, [&](double pt) { return std::abs(pt * 1e3 - full[0].pt_mw) < 1e-9; });
  const auto sub = argmin_rows(run_joint(plan, kNet, kCircuit, kRadio, kProp));
  ASSERT_EQ(sub.size(), 1U);
  EXPECT_GT(sub[0].energy_j, full[0].energy_j);
}

TEST(SweepPlan, RejectsEmptyGrids) {
  SweepPlan plan;
  plan.kind = SweepKind::joint;
  EXPECT_THROW(run_joint(plan, kNet, kCircuit, kRadio, kProp), DomainError);
  plan.kind = SweepKind::singlehop;
  plan.d_grid.clear();
  EXPECT_THROW(run_singlehop(plan, kCircuit, kRadio, kProp), DomainError);
}

TEST(Csv, NumberFormatting) {
  EXPECT_EQ(csv::number(25.0), "25");
  EXPECT_EQ(csv::number(0.1 * 1e3), "100");
  EXPECT_EQ(csv::number(-19.6898944883), "-19.6898944883");
  EXPECT_EQ(csv::number(kNaN), "nan");
}

TEST(Csv, HeadersMatchSchemas) {
  std::ostringstream s, m, j;
  csv::write_singlehop(s, {});
  csv::write_multihop(m, {});
  csv::write_joint(j, {});
  EXPECT_EQ(s.str(),
            "policy,b,d_m,pt_dbm,pmin_dbm,p_link,energy_j_per_bit,energy_dbmj,delay_s,is_argmin\n");
  EXPECT_EQ(m.str(), "policy,ber_target,b,pt_mw,route_mask,hops,energy_dbmj,delay_s,is_argmin\n");
  EXPECT_EQ(j.str(), "ber_target,b,pt_mw,route_mask,energy_dbmj,delay_s,is_global_min\n");
}
