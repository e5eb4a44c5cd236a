#pragma once

namespace wishart {

// Command-line front end; returns the process exit code
// (0 ok, 1 usage, 2 domain or model error, 3 non-convergence).
int run_cli(int argc, const char* const* argv);

}  // namespace wishart
