#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace coopnet {

// Exit codes: 0 success/pass, 1 a requested check reported violations,
// 2 usage error, 3 data error, 4 resource guard.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace coopnet
