#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nhdyn {

/// Run one CLI command (check / simulate / algorithm / scenarios) against the
/// given streams. Returns the process exit status: 0 success, 1 numerical
/// failure, 2 usage error.
int runCommand(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nhdyn
