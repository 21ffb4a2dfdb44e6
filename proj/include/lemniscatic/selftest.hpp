#pragma once

#include <cstddef>
#include <iosfwd>

namespace lemniscatic {

/// Runs the invariant suites of every module at node count n and prints one
/// line per check. Returns the number of failures (an invalid n counts as one).
int run_selftest(std::size_t n, std::ostream& out);

}  // namespace lemniscatic
