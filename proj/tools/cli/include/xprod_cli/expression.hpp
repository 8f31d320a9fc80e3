#pragma once

// Crossed-product expressions:
//
//   expr    := term (('+' | '-') term)*
//   term    := unary ('*' unary)*
//   unary   := '-' unary | power
//   power   := postfix ('^' integer)?
//   postfix := primary '*'*          adjoint
//   primary := 'U' | 'a(' name ')' | '(' expr ')' | '(' re ',' im ')' | number
//
// A '*' directly after a factor is the adjoint when the next non-blank
// character cannot start a factor (end, '+', '-', ')', '*', '^').

#include <cstddef>
#include <string>
#include <string_view>

#include "xprod/crossalg.hpp"
#include "xprod/errors.hpp"

namespace xprod::cli {

class ExpressionError : public ValidationError {
 public:
  ExpressionError(std::size_t offset, const std::string& message);
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

cross::CrossedElement parse_expression(std::string_view text, const BackendPtr& backend);

}  // namespace xprod::cli
