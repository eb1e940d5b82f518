#pragma once

#include <stdexcept>
#include <string>

namespace lutrev {

// Input-level failure: malformed netlist text, invariant violation in the
// source design, unknown primitive, etc. Maps to CLI exit code 1.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
    InputError(const std::string& msg, int line, int col)
        : std::runtime_error(msg + " at line " + std::to_string(line) + ", column " +
                             std::to_string(col)),
          line_(line), col_(col) {}

    int line() const { return line_; }
    int col() const { return col_; }

private:
    int line_ = 0;
    int col_ = 0;
};

// Broken internal invariant (a bug, not bad input). Maps to CLI exit code 2.
class InternalError : public std::logic_error {
public:
    explicit InternalError(const std::string& msg) : std::logic_error(msg) {}
};

} // namespace lutrev
