#pragma once

#include <string>
#include <vector>

#include "isochron/multipoly.hpp"

namespace isochron {

// Pseudo-remainder of a by b with respect to var: lc(b)^(da-db+1) a mod b.
MultiPoly prem(const MultiPoly& a, const MultiPoly& b, const std::string& var);

// Normalized gcd over Q (positive leading coefficient, integer coprime coefficients).
// gcd(0, 0) = 0; a nonzero constant gcd is returned as 1.
MultiPoly poly_gcd(const MultiPoly& a, const MultiPoly& b);
MultiPoly content_in(const MultiPoly& p, const std::string& var);
MultiPoly primitive_part_in(const MultiPoly& p, const std::string& var);

// Determinant of the Sylvester matrix of p and q in var, rows of p first.
// Computed by the subresultant remainder sequence.
MultiPoly poly_resultant(const MultiPoly& p, const MultiPoly& q, const std::string& var);

// Product of the distinct irreducible factors (over Q) dividing p, normalized.
MultiPoly poly_squarefree(const MultiPoly& p);

}  // namespace isochron
