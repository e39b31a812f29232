#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace bellforge {

inline constexpr const char* kVersion = BELLFORGE_VERSION;

/// Fixed column order of `sweep --format csv`.
const std::vector<std::string>& sweep_columns();

/// Root seed default: BELLFORGE_SEED if set and numeric, else 0.
std::uint64_t default_root_seed();

/// Entry point of the command-line tool. `args` includes the program name.
/// Results go to `out` (or to --out), errors to `err` as one JSON object.
/// Returns 0 on success, 1 on usage errors, 2 on computation errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bellforge
