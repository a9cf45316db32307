#pragma once

namespace tokeval {

// Full command-line front end. Returns the process exit status:
// 0 success, 1 usage error, 2 data error.
int run_cli(int argc, const char* const* argv);

}  // namespace tokeval
