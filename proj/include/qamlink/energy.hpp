#ifndef QAMLINK_ENERGY_HPP
#define QAMLINK_ENERGY_HPP

#include <cmath>
#include <optional>
#include <string>
#include <variant>

#include "qamlink/channel.hpp"
#include "qamlink/errors.hpp"
#include "qamlink/modulation.hpp"

namespace qamlink {

/// Transceiver power draw and timing.
struct CircuitProfile {
  double pct = 98.2e-3;  // W, transmitter circuitry
  double pcr = 112.5e-3; // W, receiver circuitry
  double ptr = 100e-3;   // W, transient mode
  double ttr = 5e-6;     // s, transient duration
  double eta = 0.35;     // amplifier drain efficiency
  // Per-attempt overhead added to T_on in the delay model; T_tr when unset.
  std::optional<double> retry_overhead_s;

  double retry_overhead() const { return retry_overhead_s.value_or(ttr); }

  void validate() const {
    if (!(pct > 0.0) || !(pcr > 0.0) || !(ptr > 0.0) || !(ttr > 0.0))
      throw DomainError("circuit powers and transient time must be positive");
    if (!(eta > 0.0 && eta <= 1.0))
      throw DomainError("eta must lie in (0, 1]");
    if (retry_overhead_s && !(*retry_overhead_s >= 0.0))
      throw DomainError("retry overhead must be non-negative");
  }
};

struct FixedPower {
  double pt_watts = 0.1;
};
struct VariablePower {};

/// Fixed transmit power, or power chosen per link so that the mean
/// received power equals P_min.
using PowerPolicy = std::variant<FixedPower, VariablePower>;

inline bool is_variable(const PowerPolicy& policy) {
  return std::holds_alternative<VariablePower>(policy);
}

struct LinkMetrics {
  double p_link = 0.0;
  double energy_per_bit = 0.0; // J, including expected retransmissions
  double delay = 0.0;          // s, including expected retransmissions
  double pt_dbm = 0.0;
  double pmin_dbm = 0.0;
  double gamma_b_bar = 0.0;
};

/// Energy in dB relative to 1 mJ.
inline double to_dbmj(double joules) { return 10.0 * std::log10(joules / 1e-3); }
inline double from_dbmj(double dbmj) { return 1e-3 * std::pow(10.0, dbmj / 10.0); }

/// alpha = xi/eta - 1 with xi = 3 (sqrt M - 1)/(sqrt M + 1).
inline double amplifier_overhead(const ModulationScheme& scheme, double eta) {
  if (!(eta > 0.0 && eta <= 1.0))
    throw DomainError("amplifier_overhead: eta must lie in (0, 1]");
  const double r = scheme.sqrt_order();
  const double xi = 3.0 * (r - 1.0) / (r + 1.0);
  return xi / eta - 1.0;
}

/// T_on = L / (b B).
inline double on_time(const RadioConfig& radio, const ModulationScheme& scheme) {
  return radio.packet_bits / (scheme.bits() * radio.bandwidth);
}

/// Energy per bit of one transmission attempt; sleep power is taken as zero.
inline double single_tx_energy_per_bit(double pt_watts, const ModulationScheme& scheme,
                                       const CircuitProfile& circuit,
                                       const RadioConfig& radio) {
  if (!(pt_watts >= 0.0))
    throw DomainError("transmit power must be non-negative");
  const double alpha = amplifier_overhead(scheme, circuit.eta);
  const double active_power = (1.0 + alpha) * pt_watts + circuit.pct + circuit.pcr;
  return (active_power * on_time(radio, scheme) + circuit.ptr * circuit.ttr) /
         radio.packet_bits;
}

/// Expected energy under hop-by-hop retransmission: e / (1 - p).
inline double expected_link_energy(double e_single, double p_link) {
  if (!(p_link >= 0.0 && p_link < 1.0))
    throw DomainError("expected_link_energy: p_link must lie in [0, 1)");
  return e_single / (1.0 - p_link);
}

inline double expected_link_delay(const RadioConfig& radio, const ModulationScheme& scheme,
                                  const CircuitProfile& circuit, double p_link) {
  if (!(p_link >= 0.0 && p_link < 1.0))
    throw DomainError("expected_link_delay: p_link must lie in [0, 1)");
  return (on_time(radio, scheme) + circuit.retry_overhead()) / (1.0 - p_link);
}

/// Link metrics given a precomputed required mean bit SNR.
///
/// Callers that evaluate many links at the same (target, b) should compute
/// gamma_b once and use this overload.
inline LinkMetrics link_metrics_at(double distance, const PowerPolicy& policy,
                                   const ModulationScheme& scheme, double gamma_b_bar,
                                   const CircuitProfile& circuit, const RadioConfig& radio,
                                   const PropagationParams& prop) {
  LinkMetrics m;
  m.gamma_b_bar = gamma_b_bar;
  m.pmin_dbm = watts_to_dbm(min_received_power_watts(gamma_b_bar, scheme, radio));

  double pt_watts = 0.0;
  if (const auto* fixed = std::get_if<FixedPower>(&policy)) {
    if (!(fixed->pt_watts > 0.0))
      throw DomainError("fixed transmit power must be positive");
    pt_watts = fixed->pt_watts;
    m.pt_dbm = watts_to_dbm(pt_watts);
  } else {
    m.pt_dbm = required_pt_dbm(m.pmin_dbm, distance, prop);
    pt_watts = dbm_to_watts(m.pt_dbm);
  }

  // Under variable power the mean received power sits exactly on the
  // threshold, so the outage argument is zero rather than a rounding residue.
  m.p_link = is_variable(policy) ? gaussian_q(0.0)
                                 : outage_probability({distance, m.pt_dbm, m.pmin_dbm}, prop);
  if (m.p_link >= 1.0)
    throw CertainOutage("link at " + std::to_string(distance) + " m is always in outage");
  m.energy_per_bit = expected_link_energy(
      single_tx_energy_per_bit(pt_watts, scheme, circuit, radio), m.p_link);
  m.delay = expected_link_delay(radio, scheme, circuit, m.p_link);
  return m;
}

inline LinkMetrics link_metrics(double distance, const PowerPolicy& policy,
                                const ModulationScheme& scheme, const BerTarget& target,
                                const CircuitProfile& circuit, const RadioConfig& radio,
                                const PropagationParams& prop) {
  return link_metrics_at(distance, policy, scheme, required_gamma_b(target, scheme), circuit,
                         radio, prop);
}

} // namespace qamlink

#endif
