#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tuckreg {

/// Entry point of the `tuckreg` tool. Returns 0 on success, 2 on argument
/// errors and 1 on runtime failures.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Replaces every `--config file.json` pair by the flags it lists. Keys are
/// long flag names; arrays become comma lists, `true` a bare flag, `false`
/// is dropped. Flags given after the pair win.
std::vector<std::string> expand_config_args(const std::vector<std::string>& args);

}  // namespace tuckreg
