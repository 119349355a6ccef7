#pragma once

#include <iosfwd>

namespace procnet::cli {

/// Entry point of the bench command line; returns the process exit code
/// (0 ok, 1 verification failure, 2 deadlock or budget, 3 usage).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace procnet::cli
