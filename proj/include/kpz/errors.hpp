#pragma once

#include <stdexcept>
#include <string>

namespace kpz {

// Malformed configuration input (unknown keys, wrong types, bad ranges).
// The CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A query outside the mathematical domain of an operation, e.g. a weight
// lookup off the support or a scaling request in a regime with no limit
// theorem. CLI exit code 3.
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A numerical routine could not reach its accuracy target. CLI exit code 4.
struct AccuracyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace kpz
