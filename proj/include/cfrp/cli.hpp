#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cfrp::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kUsage = 2;    // usage or validation failure
inline constexpr int kRuntime = 3;  // numeric/runtime failure

// args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace cfrp::cli
