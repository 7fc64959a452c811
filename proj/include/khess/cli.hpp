#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace khess {

inline constexpr const char* kToolVersion = "0.1.0";

// Entry point behind the khess binary. Args exclude the program name.
//
//   khess verify --config suites.json --out results/ [--seed N] [--jobs N]
//   khess compute --functional Ik --spec u.json --n 2 --k 2
//                 [--m M] [--spec more.json ...] [--quadrature KIND:PARAM]
//
// verify writes manifest.json plus one CSV per suite into the output
// directory and exits 0 when every suite passes, 2 on violations or
// aborted cases, 3 on configuration or usage errors. compute prints the
// energy value as JSON on stdout.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace khess
