#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace stirsap {

inline constexpr int kExitSuccess = 0;
inline constexpr int kExitFailure = 1;  // stirsap::Error raised by a campaign
inline constexpr int kExitUsage = 2;

// Runs the command line `args` (without the program name). Results go to
// --out, falling back to $STIRSAP_OUT_DIR and then ./out.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace stirsap
