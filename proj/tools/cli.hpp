#pragma once

#include <iosfwd>

namespace mwpx::cli {

/// Runs one mwpx command line. Returns 0 on success, 1 on data or runtime
/// errors, 2 on usage errors.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mwpx::cli
