#ifndef DNAK_TOOLS_VALIDATE_HPP
#define DNAK_TOOLS_VALIDATE_HPP

#include <ostream>

namespace dnak_cli {

/// Runs the full validation suite, printing one PASS/FAIL line per
/// criterion. Returns the number of failed criteria.
int run_acceptance(std::ostream& out);

} // namespace dnak_cli

#endif
