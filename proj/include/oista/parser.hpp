#pragma once

#include "oista/system.hpp"

#include <string>

namespace oista {

/// Parses the system-definition format:
///
///   # comment
///   affine
///   name: example1
///   states: x1, x2, x3, x4
///   inputs: 2
///   f: [0, x3, 0, -x4 + x1^2]
///   g1: [1, x4, 0, 0]
///   g2: [0, 0, 1, 0]
///   h: [x1, x2]
///
/// Expression grammar (no implicit multiplication, '/' only inside rational
/// literals):
///   expr   := ['-'] term (('+'|'-') term)*
///   term   := factor ('*' factor)*
///   factor := base ('^' nonneg-int)?
///   base   := rational | ident | '(' expr ')'
AffineSystem parse_system(const std::string& text);

/// Parses a single polynomial over the registry's declared state names.
Polynomial parse_state_polynomial(const std::string& text,
                                  const std::shared_ptr<const SymbolRegistry>& registry);

/// Parses a polynomial in t (for input signals), same grammar.
Polynomial parse_time_polynomial(const std::string& text,
                                 const std::shared_ptr<const SymbolRegistry>& registry);

} // namespace oista
