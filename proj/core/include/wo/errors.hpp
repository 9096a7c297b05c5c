#pragma once

#include <stdexcept>
#include <string>

namespace wo {

/// Base class for all errors raised by the library.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed input: bad syntax, violated preconditions, unknown names.
struct input_error : error {
    using error::error;
};

/// Syntax error with source location.
struct parse_error : input_error {
    parse_error(const std::string& msg, int line, int column)
        : input_error(msg + " (line " + std::to_string(line) + ", column " +
                      std::to_string(column) + ")"),
          line(line),
          column(column) {}
    int line;
    int column;
};

/// A position does not exist in the addressed term.
struct position_error : input_error {
    using input_error::input_error;
};

/// A depth or prefix budget was exhausted before the result stabilized.
struct budget_error : error {
    using error::error;
};

/// An internal law that should hold by theory was violated; indicates a bug.
struct property_violation : error {
    using error::error;
};

}  // namespace wo
