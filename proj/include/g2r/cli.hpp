#pragma once

#include <string>
#include <vector>

namespace g2r {

// Entry point behind the g2r executable. Returns 0 on success, 1 on a
// usage error, 2 on a runtime error.
int run_cli(int argc, const char* const* argv);
int run_cli(const std::vector<std::string>& args);  // without argv[0]

}  // namespace g2r
