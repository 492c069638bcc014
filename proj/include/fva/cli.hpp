#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fva {

/// Exit codes: 0 positive verdict or success, 1 negative verdict, 2 usage,
/// input or cap errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fva
