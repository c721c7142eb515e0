#pragma once

#include <ostream>

namespace recon_tool {

/// Property checks on small synthetic instances; prints one line per check.
bool run_selftest(std::ostream& out);

}  // namespace recon_tool
