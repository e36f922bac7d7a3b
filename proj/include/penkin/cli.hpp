#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace penkin {

// Exit codes: 0 success or stable, 2 unstable data, 1 any error (reported as a
// single line on err).
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int dispatch(int argc, char** argv);

}  // namespace penkin
