#pragma once

#include <iosfwd>

namespace nccut {

/// Entry point of the `nccut` tool. Returns 0 on success, 1 on a usage
/// error and 2 when processing fails.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace nccut
