#pragma once

#include <stdexcept>
#include <string>

namespace conespec {

// Bad arguments or malformed configuration. CLI maps this to exit code 2.
struct input_error : std::invalid_argument {
    explicit input_error(const std::string& msg) : std::invalid_argument(msg) {}
};

// A combination of cone/map/operation the library does not support.
// CLI maps this to exit code 3.
struct capability_error : std::runtime_error {
    explicit capability_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Mathematical precondition violated by the data (e.g. a matrix that must be
// positive semidefinite is not). Treated as an input error at the CLI.
struct domain_error : std::domain_error {
    explicit domain_error(const std::string& msg) : std::domain_error(msg) {}
};

}  // namespace conespec
