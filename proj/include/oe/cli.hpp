#ifndef OE_CLI_HPP
#define OE_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace oe::cli {

// Entry point of the `oe` tool. `args[0]` is the program name. Data goes to
// `out`; logs and the single-line `error: <kind>: <message>` go to `err`.
// Returns 0 on success, 1 on a runtime failure and 2 on a usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace oe::cli

#endif  // OE_CLI_HPP
