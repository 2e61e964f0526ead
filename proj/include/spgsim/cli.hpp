#pragma once

#include <string>
#include <vector>

namespace spgsim {

// Entry point behind the spgsim binary; exposed so tests can drive the CLI
// in-process. Exit codes: 0 success, 1 runtime error, 2 verification
// failure, 64 usage error.
int cli_main(int argc, const char* const* argv);
int cli_main(const std::vector<std::string>& args);  // without argv[0]

}  // namespace spgsim
