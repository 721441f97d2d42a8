#include <random>
#include <string>

#include <gtest/gtest.h>

#include "qamlink/config.hpp"

using namespace qamlink;

namespace {

ConfigError parse_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e;
  }
  ADD_FAILURE() << "no ConfigError for:\n" << text;
  return ConfigError("", 0, "none");
}

} // namespace

TEST(ParseConfig, EmptyDocumentGivesDefaults) {
  const auto c = parse_config("");
  EXPECT_EQ(c.beta, 3.12);
  EXPECT_EQ(c.sigma_psi_db, 3.8);
  EXPECT_EQ(c.pct_mw, 98.2);
  EXPECT_EQ(c.pcr_mw, 112.5);
  EXPECT_EQ(c.ptr_mw, 100.0);
  EXPECT_EQ(c.ttr_us, 5.0);
  EXPECT_EQ(c.eta, 0.35);
  EXPECT_EQ(c.n0_w_per_hz, 4e-21);
  EXPECT_EQ(c.bandwidth_hz, 1e4);
  EXPECT_EQ(c.packet_bits, 20000.0);
  EXPECT_EQ(c.relay_count, 9);
  EXPECT_EQ(c.total_distance_m, 100.0);
  EXPECT_EQ(c.pt_grid_mw.size(), 20U);
  EXPECT_FALSE(c.k_db.has_value());
  EXPECT_FALSE(c.t_r_us.has_value());

  const auto prop = c.propagation();
  EXPECT_NEAR(prop.k_db, k_db_from_carrier(2.5e9, 1.0), 1e-12);
  const auto circuit = c.circuit();
  EXPECT_DOUBLE_EQ(circuit.pct, 0.0982);
  EXPECT_DOUBLE_EQ(circuit.retry_overhead(), 5e-6);
}

TEST(ParseConfig, CommentsAndWhitespace) {
  const auto c = parse_config("# header\n\n  beta=2.9   # inline\n\tpolicy = variable\r\n");
  EXPECT_EQ(c.beta, 2.9);
  EXPECT_EQ(c.policy, "variable");
  EXPECT_TRUE(is_variable(c.power_policy()));
}

TEST(ParseConfig, ListsAndOptionalKeys) {
  const auto c = parse_config("b_grid = 4, 8\nd_grid_m = 10,20\nk_db = -35\nt_r_us = 250\n");
  EXPECT_EQ(c.b_grid, (std::vector<int>{4, 8}));
  EXPECT_EQ(c.d_grid_m, (std::vector<double>{10, 20}));
  EXPECT_EQ(c.propagation().k_db, -35.0);
  EXPECT_DOUBLE_EQ(c.circuit().retry_overhead(), 250e-6);
}

TEST(ParseConfig, NegativeBetaNamesKey) {
  const auto e = parse_error("sigma_psi_db = 4\nbeta = -1\n");
  EXPECT_EQ(e.key(), "beta");
  EXPECT_EQ(e.line(), 2);
}

TEST(ParseConfig, RangeViolations) {
  EXPECT_EQ(parse_error("eta = 1.5").key(), "eta");
  EXPECT_EQ(parse_error("ber_target = 0.5").key(), "ber_target");
  EXPECT_EQ(parse_error("ber_grid = 1e-4, 0").key(), "ber_grid");
  EXPECT_EQ(parse_error("b_grid = 2, 3").key(), "b_grid");
  EXPECT_EQ(parse_error("relay_count = 31").key(), "relay_count");
  EXPECT_EQ(parse_error("policy = adaptive").key(), "policy");
  EXPECT_EQ(parse_error("objective = latency").key(), "objective");
  EXPECT_EQ(parse_error("trials = 0").key(), "trials");
  EXPECT_EQ(parse_error("pt_mw = abc").key(), "pt_mw");
  EXPECT_EQ(parse_error("pt_mw = 1e999").key(), "pt_mw");
  EXPECT_EQ(parse_error("d_grid_m = ").key(), "d_grid_m");
}

TEST(ParseConfig, CrossKeyChecks) {
  EXPECT_EQ(parse_error("d0_m = 10\nd_grid_m = 5, 50\n").key(), "d_grid_m");
  EXPECT_EQ(parse_error("d0_m = 20\nd_grid_m = 50\n").key(), "relay_count");
}

TEST(ParseConfig, UnknownKeysListedTogether) {
  const auto e = parse_error("beta = 3\nfoo = 1\nbar = 2\n");
  EXPECT_EQ(e.line(), 2);
  const std::string what = e.what();
  EXPECT_NE(what.find("foo"), std::string::npos);
  EXPECT_NE(what.find("bar"), std::string::npos);
}

TEST(ParseConfig, MalformedLineReportsLine) {
  const auto e = parse_error("beta = 3\n\njust some words\n");
  EXPECT_EQ(e.line(), 3);
  EXPECT_EQ(parse_error("= 4").line(), 1);
}

TEST(ParseConfig, DuplicateKeyRejected) {
  const auto e = parse_error("beta = 3\nbeta = 3\n");
  EXPECT_EQ(e.key(), "beta");
  EXPECT_EQ(e.line(), 2);
}

TEST(SerializeConfig, DefaultsRoundTrip) {
  const auto text = serialize_config(RunConfig{});
  EXPECT_EQ(serialize_config(parse_config(text)), text);
  EXPECT_EQ(text.find("k_db"), std::string::npos);
}

TEST(SerializeConfig, RandomConfigsRoundTrip) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    RunConfig c;
    c.beta = 2.0 + 2.0 * u(rng);
    c.sigma_psi_db = 1.0 + 8.0 * u(rng);
    c.eta = 0.05 + 0.9 * u(rng);
    c.pt_mw = 1.0 + 199.0 * u(rng);
    c.ber_target = 1e-6 + 1e-2 * u(rng);
    c.ber_grid = {u(rng) * 0.01 + 1e-7, u(rng) * 0.3 + 1e-7};
    c.relay_count = static_cast<int>(u(rng) * 20);
    c.policy = u(rng) < 0.5 ? "fixed" : "variable";
    c.objective = u(rng) < 0.5 ? "energy" : "delay";
    c.seed = rng();
    c.seed >>= 1; // parser reads a signed 64-bit integer
    if (u(rng) < 0.5)
      c.k_db = -60.0 + 30.0 * u(rng);
    if (u(rng) < 0.5)
      c.t_r_us = 1000.0 * u(rng);

    const auto once = serialize_config(c);
    const auto parsed = parse_config(once);
    EXPECT_EQ(serialize_config(parsed), once);
    EXPECT_EQ(parsed.beta, c.beta);
    EXPECT_EQ(parsed.ber_grid, c.ber_grid);
    EXPECT_EQ(parsed.k_db, c.k_db);
    EXPECT_EQ(parsed.seed, c.seed);
  }
}
