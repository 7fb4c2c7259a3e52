#pragma once

#include <cstdint>
#include <ostream>

// Quick randomized self-check of the spin-flip amplitude and the flat-limit
// spin-current conservation. Prints one PASS/FAIL line per check and returns
// true when all pass.
bool run_selftest(std::uint64_t seed, std::ostream& out);
