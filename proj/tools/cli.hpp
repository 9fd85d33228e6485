#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "oblivisel/exact_arith.hpp"

namespace oblivisel::cli {

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kFail = 1;
inline constexpr int kUsage = 2;

/// Runs the command line `args` (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// CSV of integer pairs, one per line; `#` starts a comment. Throws
/// std::invalid_argument with the offending line number.
std::vector<Point> parse_pairs(std::istream& in);

/// "1000..16000" doubles from the first bound up to the second; otherwise a
/// comma separated list.
std::vector<std::size_t> parse_sizes(const std::string& list);

}  // namespace oblivisel::cli
