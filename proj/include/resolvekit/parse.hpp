// Polynomial text grammar: rational coefficients, + - * ^ and parentheses.
#pragma once

#include "resolvekit/poly.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace rk {

struct ParseError : std::runtime_error {
    ParseError(const std::string& msg, size_t column);
    size_t column;
};

// Parse `text` as a polynomial in `vars`. Juxtaposition such as "2x" or
// "x y" is rejected; multiplication must be written with '*'.
Poly parse_poly(const std::string& text, const std::vector<std::string>& vars);

}  // namespace rk
