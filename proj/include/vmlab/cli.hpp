#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace vmlab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // verify found a failing criterion
inline constexpr int kExitValidation = 2;
inline constexpr int kExitUnknownSubcommand = 64;
inline constexpr int kExitMalformedJson = 65;

const std::vector<std::string>& subcommands();

/// args excludes the program name. The report goes to --out when given,
/// otherwise to `out`; errors are written to `err` as a JSON object.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace vmlab::cli
