#pragma once

#include <stdexcept>
#include <string>

namespace gardo {

// Caller mistakes: bad config values, unknown presets, shape mismatches,
// missing inputs. The CLI maps these to exit code 2.
struct UsageError : std::runtime_error {
    explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

// Failures during execution (divergence, IO). CLI exit code 1.
struct RuntimeError : std::runtime_error {
    explicit RuntimeError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gardo
