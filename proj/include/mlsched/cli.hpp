#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mlsched {

/// Runs the command line tool on args (without the program name).
/// Returns 0 on success, 1 on a runtime failure and 2 on a usage error.
int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// argv-style entry point writing to std::cout and std::cerr.
int cli_dispatch(int argc, const char* const* argv);

/// Path of the shipped reference model; MLSCHED_REFERENCE_MODEL overrides it.
std::string reference_model_path();

}  // namespace mlsched
