#ifndef QAMLINK_MODULATION_HPP
#define QAMLINK_MODULATION_HPP

#include <cmath>
#include <numbers>
#include <string>

#include "qamlink/errors.hpp"
#include "qamlink/numerics.hpp"

namespace qamlink {

/// Square MQAM with M = 2^b, b in {2, 4, 6, 8, 10}.
class ModulationScheme {
public:
  explicit ModulationScheme(int bits_per_symbol) : b_(bits_per_symbol) {
    if (b_ < 2 || b_ > 10 || b_ % 2 != 0)
      throw DomainError("constellation exponent b must be one of 2,4,6,8,10; got " +
                        std::to_string(b_));
  }

  int bits() const noexcept { return b_; }
  double order() const noexcept { return std::ldexp(1.0, b_); }
  double sqrt_order() const noexcept { return std::ldexp(1.0, b_ / 2); }

  friend bool operator==(const ModulationScheme&, const ModulationScheme&) = default;

private:
  int b_;
};

/// Average bit-error-rate constraint.
class BerTarget {
public:
  static constexpr double kCeiling = 0.375; // zero-SNR BER of 4-QAM

  explicit BerTarget(double pb_bar) : pb_(pb_bar) {
    if (!(pb_ > 0.0 && pb_ <= kCeiling))
      throw DomainError("BER target must lie in (0, 0.375]; got " + std::to_string(pb_));
  }

  double value() const noexcept { return pb_; }

  friend bool operator==(const BerTarget&, const BerTarget&) = default;

private:
  double pb_;
};

/// Receiver noise and framing parameters.
struct RadioConfig {
  double n0 = 4e-21;         // W/Hz
  double bandwidth = 1e4;    // Hz
  double packet_bits = 20000;

  void validate() const {
    if (!(n0 > 0.0) || !(bandwidth > 0.0) || !(packet_bits > 0.0))
      throw DomainError("radio parameters n0, bandwidth, packet_bits must be positive");
  }
};

/// Average BER of square MQAM over Rayleigh fading at mean bit SNR
/// gamma_b_bar, via the MGF form of the craig-integral SER:
///
///   a (I(pi/2) - (1 - 1/sqrt M) I(pi/4)),  a = 4/(pi b) (1 - 1/sqrt M)
///   I(u) = int_0^u (1 + 3 gamma_b b / (2 (M-1) sin^2 phi))^-1 dphi
inline double avg_ber(double gamma_b_bar, const ModulationScheme& scheme,
                      QuadratureSpec quad = {}) {
  if (!(gamma_b_bar >= 0.0))
    throw DomainError("avg_ber: mean SNR must be non-negative");
  const double b = scheme.bits();
  const double m = scheme.order();
  const double shape = 1.0 - 1.0 / scheme.sqrt_order();
  const double c = 3.0 * gamma_b_bar * b / (2.0 * (m - 1.0));
  const auto integrand = [c](double phi) {
    const double s2 = std::sin(phi) * std::sin(phi);
    return s2 / (s2 + c);
  };
  const double prefactor = 4.0 / (std::numbers::pi * b) * shape;
  const double full = integrate(integrand, 0.0, std::numbers::pi / 2.0, quad);
  const double quarter = integrate(integrand, 0.0, std::numbers::pi / 4.0, quad);
  return prefactor * full - prefactor * shape * quarter;
}

/// BER at gamma_b_bar = 0, the largest BER this constellation can produce.
inline double zero_snr_ber(const ModulationScheme& scheme) {
  const double b = scheme.bits();
  const double shape = 1.0 - 1.0 / scheme.sqrt_order();
  return 2.0 / b * shape - 1.0 / b * shape * shape;
}

inline constexpr double kDefaultBerTolerance = 1e-10;

/// Mean bit SNR at which avg_ber meets the target.
///
/// Bisection on [0, hi] with hi doubled from 1 until avg_ber(hi) < target;
/// hi is capped at 2^60.
inline double required_gamma_b(const BerTarget& target, const ModulationScheme& scheme,
                               double tol = kDefaultBerTolerance, QuadratureSpec quad = {}) {
  if (!(tol > 0.0))
    throw DomainError("required_gamma_b: tol must be positive");
  const double pb = target.value();
  const auto ber = [&](double g) { return avg_ber(g, scheme, quad); };
  const double ceiling = ber(0.0);
  if (pb > ceiling + tol)
    throw InfeasibleTarget("BER target " + std::to_string(pb) +
                           " exceeds the zero-SNR ceiling " + std::to_string(ceiling) +
                           " for b=" + std::to_string(scheme.bits()));
  if (std::abs(ceiling - pb) <= tol)
    return 0.0;

  double hi = 1.0;
  const double cap = std::ldexp(1.0, 60);
  while (ber(hi) >= pb) {
    hi *= 2.0;
    if (hi > cap)
      throw InfeasibleTarget("BER target " + std::to_string(pb) +
                             " unreachable below mean SNR 2^60");
  }
  return solve_monotone(ber, pb, 0.0, hi, tol);
}

/// P_min = gamma_b N0 B log2 M, in watts.
inline double min_received_power_watts(double gamma_b_bar, const ModulationScheme& scheme,
                                       const RadioConfig& radio) {
  if (!(gamma_b_bar >= 0.0))
    throw DomainError("min_received_power_watts: mean SNR must be non-negative");
  return gamma_b_bar * radio.n0 * radio.bandwidth * scheme.bits();
}

/// AWGN symbol error probability of square MQAM at symbol SNR gamma_s.
inline double instantaneous_ser(double gamma_s, const ModulationScheme& scheme) {
  if (!(gamma_s >= 0.0))
    throw DomainError("instantaneous_ser: SNR must be non-negative");
  const double m = scheme.order();
  const double root_m = scheme.sqrt_order();
  const double q = gaussian_q(std::sqrt(3.0 * gamma_s / (m - 1.0)));
  return 4.0 * (root_m - 1.0) / root_m * q - 4.0 * (m - 2.0 * root_m + 1.0) / m * q * q;
}

} // namespace qamlink

#endif
