#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pcdiff::cli {

// Exit codes: 0 success, 1 invalid configuration or arguments, 2 runtime failure.
inline constexpr int kOk = 0;
inline constexpr int kConfigError = 1;
inline constexpr int kRuntimeError = 2;

int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pcdiff::cli
