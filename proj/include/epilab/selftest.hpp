#pragma once

#include <ostream>

namespace epilab::selftest {

// Runs the full acceptance checklist, printing one [PASS]/[FAIL] line per
// criterion plus the measured numbers it judged. Returns the number of
// failed criteria, so callers can use it directly as an exit status.
int run_all(std::ostream& out);

}  // namespace epilab::selftest
