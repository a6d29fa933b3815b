#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace mor {

struct ExprError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Compile an arithmetic expression over the variables x and y into a
/// callable. Supports + - * / ^, parentheses, the constants pi and e, and
/// the functions sin cos tan exp log sqrt abs atan2 min max pow hypot.
std::function<double(double, double)> parse_expression(const std::string& text);

}  // namespace mor
