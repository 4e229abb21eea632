#include "nildist/formula.hpp"

#include <cmath>
#include <numbers>

#include "nildist/errors.hpp"

namespace nildist {

TraceValue TraceValue::of_real(double tau) {
  if (!std::isfinite(tau) || !(tau > 0) || tau > 1)
    throw InputError("trace value must lie in (0, 1]");
  return TraceValue{tau, std::nullopt};
}

TraceValue TraceValue::of_rank(std::size_t m, std::size_t n) {
  if (m == 0 || m > n) throw InputError("rank/dimension must satisfy 1 <= m <= n");
  return TraceValue{static_cast<double>(m) / static_cast<double>(n),
                    std::make_pair(m, n)};
}

ThetaAngles ThetaAngles::from_theta(double theta) {
  constexpr double third_pi = std::numbers::pi / 3;
  if (!std::isfinite(theta) || !(theta > 0) || theta > third_pi * (1 + 1e-12))
    throw InputError("theta must lie in (0, pi/3]");
  return ThetaAngles{theta, theta / 2, std::numbers::pi - 2 * theta};
}

ThetaAngles theta_of_trace(const TraceValue& tau) {
  return ThetaAngles::from_theta(tau.value * std::numbers::pi /
                                 (1 + 2 * tau.value));
}

double nu_finite(const TraceValue& tau) {
  return 1.0 / (2 * std::cos(theta_of_trace(tau).theta));
}

double nu_infinite(bool coprojection_finite) {
  return coprojection_finite ? 1.0 : 0.5;
}

}  // namespace nildist
