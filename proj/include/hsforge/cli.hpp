#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hsforge::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;         // parse or validation failure
inline constexpr int kExitPrecondition = 2;  // operation precondition violated
inline constexpr int kExitSelfcheck = 3;     // selfcheck reported failures

struct CommandInfo {
    std::string path;              // e.g. "hs act"
    std::vector<std::string> ops;  // library operations the command reaches
    std::string summary;
};

const std::vector<CommandInfo>& command_registry();
// Every public library operation; each must be reachable from some command.
const std::vector<std::string>& library_ops();

// args excludes the program name. Results go to `out`; diagnostics to `err`.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

} // namespace hsforge::cli
