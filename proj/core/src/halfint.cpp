#include "aeqnd/halfint.hpp"

#include <cmath>
#include <cstdlib>

#include "aeqnd/errors.hpp"

namespace aeqnd {

HalfInt HalfInt::from_double(double value) {
  const double t = 2.0 * value;
  const double r = std::round(t);
  if (!std::isfinite(value) || std::abs(t - r) > 1e-9 || std::abs(r) > 1e6) {
    throw InvalidArgument("not a half-integer: " + std::to_string(value));
  }
  return from_twice(static_cast<int>(r));
}

HalfInt HalfInt::parse(const std::string& text) {
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    const std::string num = text.substr(0, slash);
    const std::string den = text.substr(slash + 1);
    char* end = nullptr;
    const long n = std::strtol(num.c_str(), &end, 10);
    if (num.empty() || *end != '\0' || den != "2") {
      throw InvalidArgument("cannot parse half-integer '" + text + "'");
    }
    return from_twice(static_cast<int>(n));
  }
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || *end != '\0') {
    throw InvalidArgument("cannot parse half-integer '" + text + "'");
  }
  return from_double(v);
}

std::string HalfInt::str() const {
  if (is_integer()) return std::to_string(twice_ / 2);
  return std::to_string(twice_) + "/2";
}

std::ostream& operator<<(std::ostream& os, HalfInt h) { return os << h.str(); }

}  // namespace aeqnd
