#pragma once

// The pgspi command line. Every command builds a JSON report; text output is
// a rendering of the same document.
//
// Exit codes: 0 ok, 1 verification failed, 2 input error, 3 I/O error.

#include <iosfwd>
#include <string>
#include <vector>

#include "pgspi/io.hpp"

namespace pgspi::cli {

enum Exit { kOk = 0, kFailed = 1, kInput = 2, kIo = 3 };

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Indented "key: value" lines; short arrays print inline as tuples.
std::string render_text(const Json& report);

}  // namespace pgspi::cli
