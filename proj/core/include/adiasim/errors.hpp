#pragma once

#include <stdexcept>
#include <string>

namespace adiasim {

enum class ErrorKind {
  Syntax,          // malformed statement in a netlist file
  DuplicateName,   // node or device name already taken (case-insensitive)
  UnknownNode,     // reference to an undeclared node
  MissingRail,     // rail constraints violated (one GND, at least one VDD/PCLK)
  InvalidValue,    // non-positive resistance, negative capacitance, self-shorted switch, ...
  MissingInput,    // evaluation called without a value for every input pin
  NonConvergence,  // no switch-level fixed point within the iteration budget
  ZeroCapacitance, // constant-current voltage requested on a zero capacitance
  SingularSystem,  // nodal solve hit a pivot below the singularity guard
};

const char* error_kind_name(ErrorKind kind);

/// Error type for everything the simulator rejects. Parse errors carry a
/// 1-based line/column; other errors leave them at 0.
class SimError : public std::runtime_error {
public:
  SimError(ErrorKind kind, std::string message, int line = 0, int column = 0)
      : std::runtime_error(format(kind, message, line, column)),
        kind_(kind), line_(line), column_(column) {}

  ErrorKind kind() const { return kind_; }
  int line() const { return line_; }
  int column() const { return column_; }

private:
  static std::string format(ErrorKind kind, const std::string& message,
                            int line, int column);

  ErrorKind kind_;
  int line_;
  int column_;
};

} // namespace adiasim
