#pragma once

#include <iosfwd>

namespace hyptctl {

/// Command-line driver. Exit codes: 0 success, 1 property false (check),
/// 2 usage error, 3 timeout/partial result.
int cli_run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hyptctl
