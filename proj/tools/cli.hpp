#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace coinflow::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_input_error = 1;
inline constexpr int exit_internal_error = 2;

// Entry point shared by the coinflow binary and the test suites. `args`
// excludes the program name.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace coinflow::cli
