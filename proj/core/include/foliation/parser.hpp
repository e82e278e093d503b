#pragma once

#include "foliation/poly.hpp"

#include <span>
#include <string>
#include <string_view>

namespace fol {

// Parses a polynomial expression over the given ordered variable names.
//
//   expr     := ['+'|'-'] term (('+'|'-') term)*
//   term     := factor ('*' factor)*
//   factor   := base ('^' uint)?
//   base     := rational | varname | '(' expr ')'
//   rational := int ('/' uint)?
//
// Whitespace is insignificant.  Throws ParseError (with byte offset) on
// syntax errors and unknown variable names.
Poly parse_poly(std::string_view text, std::span<const std::string> variables);

// Convenience overload for the plane (x, y) or any default naming.
Poly parse_poly(std::string_view text, std::size_t nvars);

// Inverse of parse_poly: graded-lex order, explicit '*' and '^'.
std::string print_poly(const Poly& p, std::span<const std::string> variables);

} // namespace fol
