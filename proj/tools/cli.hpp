#ifndef PHMM_TOOLS_CLI_HPP_
#define PHMM_TOOLS_CLI_HPP_

#include <iosfwd>

namespace phmm::cli {

/// Entry point of the `phmm` tool. Exit codes: 0 success, 1 numerical
/// failure, 2 usage or config error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace phmm::cli

#endif  // PHMM_TOOLS_CLI_HPP_
