#pragma once

#include "mvlim/expr.hpp"

#include <stdexcept>
#include <string>
#include <string_view>

namespace mvlim {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, size_t offset)
      : std::runtime_error(message + " at offset " + std::to_string(offset)), offset_(offset) {}
  size_t offset() const { return offset_; }

 private:
  size_t offset_;
};

/// Parses the expression grammar
///
///   expr     := term (("+"|"-") term)*
///   term     := unary (("*"|"/") unary)*
///   unary    := "-" unary | factor
///   factor   := base ("^" exponent)?
///   exponent := integer | "(" ["-"] integer ["/" integer] ")"
///   base     := number | identifier | "(" expr ")" | funcname "(" expr ")"
///
/// into canonical form. Numbers may carry a decimal point and are read
/// exactly. Implicit multiplication is rejected.
Expr parse(std::string_view text);

}  // namespace mvlim
