#pragma once
#include <cstdint>
#include <stdexcept>
#include <string>

namespace twosq {

// Input outside an operation's documented domain (range errors,
// violated preconditions, malformed input). CLI exit code 1.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Request exceeds a configured resource budget (table limit, transform
// length, memory). CLI exit code 2. `needed_limit` carries the smallest
// limit that would have satisfied the request when that is known.
struct CapacityError : std::runtime_error {
    std::uint64_t needed_limit = 0;
    explicit CapacityError(const std::string& msg, std::uint64_t needed = 0)
        : std::runtime_error(msg), needed_limit(needed) {}
};

// An exact comparison or expansion could not be certified at the
// available precision. Never degrades into a silent wrong answer.
struct IndeterminateError : std::runtime_error {
    std::size_t safe_depth = 0;
    explicit IndeterminateError(const std::string& msg, std::size_t depth = 0)
        : std::runtime_error(msg), safe_depth(depth) {}
};

}  // namespace twosq
