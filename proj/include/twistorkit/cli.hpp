#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace twistorkit {

// Entry point shared by the binary and the tests.  Machine-readable JSON goes
// to out, human-oriented summaries to err.  Exit codes: 0 success, 1 failed
// checks, 2 usage, 3 malformed input documents.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace twistorkit
