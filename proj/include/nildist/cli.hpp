#pragma once

#include <iosfwd>

namespace nildist {

/* Full command-line driver. Returns the process exit code: 0 success,
 * 2 usage, 3 certificate failed verification, 4 identity disagreement,
 * 1 internal failure. JSON goes to out, diagnostics to err. */
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace nildist
