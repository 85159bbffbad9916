#pragma once

namespace coopsig {

// Full command-line surface: parses, executes, and reports. Returns the
// process exit status: 0 success, 1 runtime failure, 2 usage error.
int run_cli(int argc, const char* const* argv);

}  // namespace coopsig
