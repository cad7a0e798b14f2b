#pragma once

#include <string>
#include <vector>

#include "hessolve/errors.hpp"

namespace hessolve::expr {

/// A parsed arithmetic expression in the variables x, y, z.
///
/// Grammar: numbers, x/y/z, pi, e, + - * / ^ (right-associative power),
/// unary minus, parentheses, and the functions sin, cos, tan, exp, log,
/// sqrt, abs, tanh, min(a,b), max(a,b), pow(a,b).  Parsing happens once;
/// evaluation walks a postfix program and is allocation-free.
class Expression {
 public:
  /// Throws InvalidSpec on any syntax error.
  static Expression parse(const std::string& text);

  double eval(double x, double y, double z) const;

  const std::string& text() const { return text_; }

 private:
  struct Op {
    int code = 0;
    double value = 0.0;
  };
  std::string text_;
  std::vector<Op> program_;
};

}  // namespace hessolve::expr
