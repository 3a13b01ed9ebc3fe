#pragma once

#include <string_view>

#include "qpbraid/polynomial.hpp"

namespace qpbraid {

/// Parses expressions such as "w^3 - 3*w + 2*z^4" or "(w-1)*(w-z) + 0.05".
/// Supports + - * ^ (non-negative integer exponents), parentheses, integer
/// and decimal literals, the variables z and w, and the imaginary unit i.
/// Throws InputError on syntax errors or when the result has poles.
BivariatePolynomial parse_polynomial_expression(std::string_view text);

}  // namespace qpbraid
