#pragma once

#include <stdexcept>
#include <string>

namespace extkit {

/// Input could not be parsed. Carries a 1-based line number when known.
class parse_error : public std::runtime_error {
public:
    parse_error(std::string what, int line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what
                                      : std::move(what)),
          line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

/// Instance exceeds a brute-force size cap.
class size_limit_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operation called on a problem whose partial order it does not support.
class unsupported_direction_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A documented precondition was violated (infeasible candidate, bad index, ...).
class precondition_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace extkit
