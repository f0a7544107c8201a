#pragma once

#include <iosfwd>

#include "penlab/config.hpp"

namespace penlab {

/// Execute one configured command, print the human-readable summary to
/// `out`, and write JSON/CSV artifacts when paths are set.
/// Exit status: 0 success, 1 failed relation (verify/bench), 2 bad
/// configuration, 3 solver failure.
int run(RunConfig cfg, std::ostream& out, std::ostream& err);

}  // namespace penlab
