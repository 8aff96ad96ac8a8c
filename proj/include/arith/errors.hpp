#pragma once

#include <stdexcept>
#include <string>

namespace arith {

// Enumeration or precision work would exceed the configured budget.
struct BudgetError : std::runtime_error {
    explicit BudgetError(const std::string& msg) : std::runtime_error(msg) {}
};

// A verified identity failed (signals a transcription or logic bug, or a
// deliberately malformed input in negative tests).
struct VerifyError : std::runtime_error {
    explicit VerifyError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace arith
