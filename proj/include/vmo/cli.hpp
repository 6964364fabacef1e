#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace vmo::cli {

/// Exit codes: 0 success, 1 parse/input error, 2 structural singularity or
/// singular block, 3 invalid flags or dimension mismatch.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace vmo::cli
