#pragma once

#include <stdexcept>

namespace nildist {

/* Bad arguments or violated preconditions on caller-supplied data. */
struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/* A scalar function applied outside its domain, or data outside the
 * representable range of an operation (a matrix that is not PSD, a spectrum
 * hitting a pole of cot). */
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

/* An iteration failed to converge or a numerical guarantee was missed. */
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/* A freshly constructed object violated its own invariants: a bug. */
struct InternalError : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace nildist
