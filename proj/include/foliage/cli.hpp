#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace foliage::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitNumerical = 3;

// Subcommand names in dispatch order.
const std::vector<std::string>& subcommands();

// args excludes the program name: {"eigen-ratio", "--input", "N.json"}.
// The report goes to --output when given, else to out; diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int main(int argc, char** argv);

} // namespace foliage::cli
