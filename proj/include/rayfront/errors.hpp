#pragma once

#include <stdexcept>
#include <string>

namespace rayfront {

enum class ErrorKind {
    invalid_parameter,
    degenerate_front,
    invalid_ray,
    inadmissible_ray,
    convexity_loss,
    oracle_inconsistency,
    insufficient_resolution,
    ridge_proximity,
    parse_error,
    io_error,
};

// All failure paths throw this; the CLI maps kinds to exit codes.
class SimError : public std::runtime_error {
public:
    SimError(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
    throw SimError(kind, what);
}

}  // namespace rayfront
