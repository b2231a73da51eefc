#pragma once

#include <stdexcept>
#include <string>

namespace ggt {

// Base class for all toolkit errors.
struct error : std::runtime_error {
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

// Bad input: undeclared generators, malformed configs, preconditions
// violated by caller-supplied data. CLI exit code 2.
struct config_error : error {
    explicit config_error(const std::string& what) : error(what) {}
};

// A configured search budget or enumeration cap was hit and the result
// could not be completed. CLI exit code 3. Operations that can return a
// flagged partial result do so instead of throwing.
struct cap_error : error {
    explicit cap_error(const std::string& what) : error(what) {}
};

// A theorem-backed invariant failed. This is always an implementation
// bug, never a data problem. CLI exit code 4.
struct invariant_error : error {
    explicit invariant_error(const std::string& what) : error(what) {}
};

}  // namespace ggt
