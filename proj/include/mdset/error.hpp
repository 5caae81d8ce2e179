#pragma once

#include <stdexcept>
#include <string>

namespace mdset {

// Base class for everything this library throws on purpose.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad input: malformed digit sets, out-of-range parameters, unusable configs.
// The CLI maps this to exit code 2.
struct invalid_argument_error : error {
    using error::error;
};

// A resource guard tripped (enumeration too large, grid too fine, iteration
// cap hit). Work was refused, not attempted. The CLI maps this to exit code 3.
struct guard_error : error {
    using error::error;
};

} // namespace mdset
