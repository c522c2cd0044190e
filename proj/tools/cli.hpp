#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace firmin::cli {

// Exit codes: 0 success (certificate optimal where applicable),
// 1 well-formed but suboptimal filter, 2 input/parse error,
// 3 solver or factorization failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace firmin::cli
