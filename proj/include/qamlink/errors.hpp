#ifndef QAMLINK_ERRORS_HPP
#define QAMLINK_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qamlink {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Link whose outage probability rounds to one; no finite number of
/// retransmissions delivers the packet.
class CertainOutage : public DomainError {
public:
  using DomainError::DomainError;
};

/// Root-finding target not bracketed by the function values at the endpoints.
class BracketError : public std::runtime_error {
public:
  BracketError(double target, double f_lo, double f_hi)
      : std::runtime_error("target " + std::to_string(target) +
                           " not bracketed by f(lo)=" + std::to_string(f_lo) +
                           " and f(hi)=" + std::to_string(f_hi)),
        target_(target), f_lo_(f_lo), f_hi_(f_hi) {}

  double target() const noexcept { return target_; }
  double f_lo() const noexcept { return f_lo_; }
  double f_hi() const noexcept { return f_hi_; }

private:
  double target_;
  double f_lo_;
  double f_hi_;
};

/// BER target that no finite SNR can reach for the given constellation.
class InfeasibleTarget : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace qamlink

#endif
