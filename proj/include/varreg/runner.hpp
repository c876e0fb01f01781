#ifndef VARREG_RUNNER_HPP
#define VARREG_RUNNER_HPP

#include <string>

#include "varreg/config.hpp"

namespace varreg {

struct RunOptions {
    std::string out_dir;   // overrides [output] directory when non-empty
    bool svg = false;      // force SVG emission
    int grid_override = 0; // --grid
    int example36_n = 1;   // --n (example36 only)
};

// Exit codes: 0 success, 1 config error, 2 solver non-convergence,
// 3 regularity hypothesis violated (degeneracy/monotonicity/surjectivity),
// 4 internal error. Diagnostics go to stderr, artifacts to the output dir.
int run_command(const std::string& command, const RunConfig& cfg, const RunOptions& opt);

// selftest needs no configuration
int run_selftest();

} // namespace varreg

#endif
