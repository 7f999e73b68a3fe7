#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pi2 {

// Exit codes: 0 computed (whatever the verdict), 1 input/parse error,
// 2 resource bound exceeded.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pi2
