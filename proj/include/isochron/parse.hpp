#pragma once

#include <string_view>

#include "isochron/expr.hpp"
#include "isochron/multipoly.hpp"
#include "isochron/ratfun.hpp"

namespace isochron {

// Rational expressions over Q in the parse_expr grammar; integer exponents only.
RatFun parse_ratfun(std::string_view text);
// Same grammar; throws DomainError unless the result is a polynomial.
MultiPoly parse_poly(std::string_view text);

}  // namespace isochron
