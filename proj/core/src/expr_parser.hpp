#pragma once

#include "smoothck/expr.hpp"
#include "text_cursor.hpp"

namespace smoothck::detail {

// Recursive-descent parser for arithmetic:
//   sum     := product (('+' | '-') product)*
//   product := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?
//   primary := number | identifier | call '(' args ')' | '(' sum ')'
Expr parse_arith(TextCursor& cur, bool allow_signals);

}  // namespace smoothck::detail
