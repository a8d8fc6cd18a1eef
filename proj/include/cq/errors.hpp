#pragma once

#include <stdexcept>
#include <string>

namespace cq {

// Bad inputs, malformed configs, unsupported requests. CLI exit code 1.
struct validation_error : std::runtime_error {
    explicit validation_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A physics invariant that should hold numerically does not. CLI exit code 2.
struct physics_error : std::runtime_error {
    explicit physics_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace cq
