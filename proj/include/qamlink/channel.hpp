#ifndef QAMLINK_CHANNEL_HPP
#define QAMLINK_CHANNEL_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "qamlink/errors.hpp"
#include "qamlink/numerics.hpp"

namespace qamlink {

inline constexpr double kSpeedOfLight = 2.998e8; // m/s

/// 0 dBm == 1 mW.
inline double watts_to_dbm(double watts) { return 10.0 * std::log10(watts / 1e-3); }
inline double dbm_to_watts(double dbm) { return 1e-3 * std::pow(10.0, dbm / 10.0); }

/// Free-space gain at the reference distance, 20 log10(lambda / (4 pi d0)).
inline double k_db_from_carrier(double frequency_hz, double d0_m) {
  if (!(frequency_hz > 0.0) || !(d0_m > 0.0))
    throw DomainError("k_db_from_carrier: frequency and d0 must be positive");
  const double wavelength = kSpeedOfLight / frequency_hz;
  return 20.0 * std::log10(wavelength / (4.0 * std::numbers::pi * d0_m));
}

/// Path loss with log-normal shadowing.
struct PropagationParams {
  double d0 = 1.0;            // m
  double beta = 3.12;         // path-loss exponent
  double sigma_psi_db = 3.8;  // dB
  double k_db = k_db_from_carrier(2.5e9, 1.0);

  void validate() const {
    if (!(d0 > 0.0))
      throw DomainError("d0 must be positive");
    if (!(beta > 0.0))
      throw DomainError("beta must be positive");
    if (!(sigma_psi_db > 0.0))
      throw DomainError("sigma_psi_db must be positive");
    if (!std::isfinite(k_db))
      throw DomainError("k_db must be finite");
  }
};

/// One hop with a transmit power and a reception threshold, both in dBm.
struct ShadowedLink {
  double distance = 1.0; // m
  double pt_dbm = 20.0;
  double pmin_dbm = -90.0;
};

namespace detail {
inline void check_distance(double distance, const PropagationParams& params) {
  if (!(distance >= params.d0))
    throw DomainError("distance " + std::to_string(distance) +
                      " m is below the reference distance d0");
}
} // namespace detail

inline double mean_received_power_dbm(double pt_dbm, double distance,
                                      const PropagationParams& params) {
  detail::check_distance(distance, params);
  return pt_dbm + params.k_db - 10.0 * params.beta * std::log10(distance / params.d0);
}

/// Transmit power that puts the mean received power exactly at pmin_dbm.
inline double required_pt_dbm(double pmin_dbm, double distance,
                              const PropagationParams& params) {
  detail::check_distance(distance, params);
  return pmin_dbm - params.k_db + 10.0 * params.beta * std::log10(distance / params.d0);
}

/// Probability that the shadowed received power falls to or below pmin.
inline double outage_probability(const ShadowedLink& link, const PropagationParams& params) {
  const double mean = mean_received_power_dbm(link.pt_dbm, link.distance, params);
  // 1 - Q(x) written as Q(-x) keeps small outage probabilities accurate
  return gaussian_q((mean - link.pmin_dbm) / params.sigma_psi_db);
}

/// SplitMix64 finalizer; derives independent stream seeds from one seed.
inline std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

struct MonteCarloOutage {
  double empirical_probability = 0.0;
  double mean_transmission_count = 0.0;
};

/// Empirical outage rate and mean HHR attempt count from shadowing draws.
///
/// Each attempt draws an independent psi_dB. The probability estimate and
/// the per-packet retransmission simulation use separate streams derived
/// from `seed`, so both are reproducible.
inline MonteCarloOutage monte_carlo_outage(const ShadowedLink& link,
                                           const PropagationParams& params,
                                           std::uint64_t trials, std::uint64_t seed) {
  if (trials == 0)
    throw DomainError("monte_carlo_outage: trials must be >= 1");
  const double mean = mean_received_power_dbm(link.pt_dbm, link.distance, params);
  // received = mean - psi <= pmin  <=>  psi >= mean - pmin
  const double margin = mean - link.pmin_dbm;

  std::mt19937_64 outage_rng(split_seed(seed, 0));
  std::normal_distribution<double> psi(0.0, params.sigma_psi_db);
  std::uint64_t outages = 0;
  for (std::uint64_t i = 0; i < trials; ++i)
    if (psi(outage_rng) >= margin)
      ++outages;

  std::mt19937_64 packet_rng(split_seed(seed, 1));
  psi.reset();
  long double attempts = 0;
  for (std::uint64_t i = 0; i < trials; ++i) {
    std::uint64_t n = 1;
    while (psi(packet_rng) >= margin)
      ++n;
    attempts += static_cast<long double>(n);
  }

  return {static_cast<double>(outages) / static_cast<double>(trials),
          static_cast<double>(attempts / static_cast<long double>(trials))};
}

} // namespace qamlink

#endif
