// qamlink: energy-per-bit sweeps and Monte-Carlo checks for MQAM links.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "qamlink/commands.hpp"

namespace {

struct Overrides {
  std::string config_path;
  std::string out;
  std::string policy;
  std::string objective;
  long long seed = -1;
  long long trials = -1;
};

void add_common(CLI::App* sub, Overrides& o) {
  sub->add_option("--config", o.config_path, "key = value configuration file");
  sub->add_option("--out", o.out, "output path (CSV, or report for validate)");
  sub->add_option("--seed", o.seed, "random seed");
  sub->add_option("--policy", o.policy, "transmit power policy")
      ->check(CLI::IsMember({"fixed", "variable"}));
}

qamlink::RunConfig load(const Overrides& o) {
  std::string text;
  if (!o.config_path.empty()) {
    std::ifstream in(o.config_path);
    if (!in)
      throw qamlink::ConfigError("", 0, "cannot read config file '" + o.config_path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  auto cfg = qamlink::parse_config(text);
  if (!o.out.empty())
    cfg.output_path = o.out;
  if (!o.policy.empty())
    cfg.policy = o.policy;
  if (!o.objective.empty())
    cfg.objective = o.objective;
  if (o.seed >= 0)
    cfg.seed = static_cast<std::uint64_t>(o.seed);
  if (o.trials >= 0)
    cfg.trials = static_cast<std::uint64_t>(o.trials);
  return cfg;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy-per-bit analysis of MQAM links under shadowing and Rayleigh fading"};
  app.require_subcommand(1);

  Overrides o;
  auto* singlehop = app.add_subcommand("singlehop", "energy vs constellation size and distance");
  auto* multihop = app.add_subcommand("multihop", "optimal-route energy and delay vs b");
  auto* joint = app.add_subcommand("joint", "global optimum over b and transmit power");
  auto* validate = app.add_subcommand("validate", "Monte-Carlo check of outage model");
  for (auto* sub : {singlehop, multihop, joint, validate})
    add_common(sub, o);
  multihop->add_option("--objective", o.objective, "route objective")
      ->check(CLI::IsMember({"energy", "delay"}));
  validate->add_option("--trials", o.trials, "Monte-Carlo trials per link");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? qamlink::kExitOk : qamlink::kExitConfigError;
  }

  try {
    const auto cfg = load(o);
    if (singlehop->parsed())
      return qamlink::cmd_singlehop(cfg, std::cout, std::cerr);
    if (multihop->parsed())
      return qamlink::cmd_multihop(cfg, std::cout, std::cerr);
    if (joint->parsed())
      return qamlink::cmd_joint(cfg, std::cout, std::cerr);
    return qamlink::cmd_validate(cfg, std::cout, std::cerr);
  } catch (const qamlink::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return qamlink::kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return qamlink::kExitConfigError;
  }
}
