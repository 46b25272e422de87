#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace pmcdm {

// Runs the pmcdm command line (args excludes the program name) and returns
// the process exit code: 0 success, 1 usage, 2 data validation, 3 numeric
// failure. Errors are reported on err as one line:
//   error: code=E_DATA <message>
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pmcdm
