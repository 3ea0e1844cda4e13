#pragma once

namespace loewner {

// Full command-line front end; returns the process exit code.
//   0  success / all checks passed
//   1  verification failure (reports still written)
//   2  usage or configuration error
//   3  numerical failure (swallowed point, generation failure, ...)
int run_cli(int argc, const char* const* argv);

} // namespace loewner
