// The `foalt` command line.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace foalt {

// Exit codes: 0 empty / holds / true, 1 nonempty / violated / false,
// 2 unknown, 3 usage or input error.
int runCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace foalt
