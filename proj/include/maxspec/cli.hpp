#pragma once

#include <ostream>

namespace maxspec {

/// Exit status: 0 success, 2 invalid input or precondition, 3 oracle
/// violation, 4 resource cap.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace maxspec
