#pragma once

#include <cstddef>
#include <optional>
#include <utility>

namespace nildist {

/* Normalized trace of a projection, in (0, 1]. Remembers the rank/dimension
 * pair when it came from one. */
struct TraceValue {
  double value;
  std::optional<std::pair<std::size_t, std::size_t>> rational;  // (m, n)

  static TraceValue of_real(double tau);
  static TraceValue of_rank(std::size_t m, std::size_t n);
};

/* theta = tau*pi/(1 + 2*tau) together with the derived angles used by the
 * spectral parametrization: phi = theta/2 and cap = pi - 2*theta, the top of
 * the admissible spectrum. theta lies in (0, pi/3], so cap >= pi/3. */
struct ThetaAngles {
  double theta;
  double phi;
  double cap;

  static ThetaAngles from_theta(double theta);
};

ThetaAngles theta_of_trace(const TraceValue& tau);

/* Distance from a projection with normalized trace tau to the nilpotents:
 * (2 cos theta)^-1, strictly increasing in tau, range (1/2, 1]. */
double nu_finite(const TraceValue& tau);

/* The two infinite-multiplicity values: 1 when the co-projection is finite,
 * 1/2 otherwise. */
double nu_infinite(bool coprojection_finite);

}  // namespace nildist
