#pragma once

#include <string>
#include <vector>

namespace hapto {

/// Command-line entry point (subcommands: run, compare, eps-study,
/// mesh gen). Returns 0 on success, 2 on usage errors, 1 otherwise;
/// failures print one structured "error: ..." line on stderr.
int cli_main(const std::vector<std::string>& args);

}  // namespace hapto
