#pragma once

#include <functional>
#include <string>

namespace gaplab {

/// Parses an arithmetic expression in one variable (`theta`, `t` or `x`).
/// Supports + - * / ^, parentheses, the constants pi and e, and the functions
/// sin cos tan exp log sqrt abs. Anything else is an invalid-argument error.
std::function<double(double)> parse_expression(const std::string& text);

}  // namespace gaplab
