#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "noonsim/protocol.hpp"

namespace noonsim::dsl {

/// Location of the first problem in a protocol source. Line and column are
/// 1-based and point at the offending token (or just past the last token of
/// the statement when one is missing).
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, std::string message, std::string token);

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }
  const std::string& message() const noexcept { return message_; }
  const std::string& token() const noexcept { return token_; }

 private:
  int line_;
  int column_;
  std::string message_;
  std::string token_;
};

/// Parses a line-oriented protocol (.qproto):
///
///   param chi = NUMBER            param delta = NUMBER
///   cutoff INT
///   prepare atom e|g|superposition
///   prepare cavity A|B fock INT
///   rotate ANGLE                  ANGLE := NUMBER | pi | pi/2 | NUMBER * pi
///   interact A|B NUMBER
///   measure atom e|g [sample INT]
///
/// '#' starts a comment; blank lines are ignored; LF and CRLF both work.
/// Throws ParseError on the first problem.
Program parse(std::string_view source);

/// Canonical text: params first (chi, delta, cutoff always emitted), one
/// statement per line, single spaces, shortest round-trip numbers.
std::string format(const Program& prog);

/// Shortest decimal string that parses back to exactly `value`.
std::string format_number(double value);

}  // namespace noonsim::dsl
