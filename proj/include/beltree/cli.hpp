#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace beltree::cli {

// Runs the command-line driver. Exit codes: 0 ok, 1 usage, 2 data error,
// 3 numeric/decombination failure.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace beltree::cli
