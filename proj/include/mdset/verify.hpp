#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mdset {

// Tally of one verification suite. first_failure carries the earliest
// failing case in compact key=value form; empty when the suite is clean.
struct SuiteResult {
    std::string name;
    std::uint64_t cases = 0;
    std::uint64_t failures = 0;
    std::string first_failure;
};

struct VerifyOptions {
    std::uint64_t seed = 0;
    int threads = 1;            // worker count for the box-count suite
    bool corrupt_measure = false; // swap in a wrong cylinder weight; must fail
};

// Runs the cross-checking battery:
//   - closed formula vs. transference minimum on random instances
//   - exact measure invariance, partition-of-mass, product-vs-branch identity
//   - scale-ladder sandwiches in exact rational arithmetic
//   - cube-count chain majorants on random smooth instances
//   - min-over-coordinates certified exponent vs. the direct formula
//   - threaded grid counts against pinned exact values
// Deterministic for a fixed seed; the thread count never changes a tally.
std::vector<SuiteResult> run_verify_suites(const VerifyOptions& opt);

} // namespace mdset
