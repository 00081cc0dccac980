#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace aeqnd {

// Internal frequencies are angular, rad/us. MHz values are f/2pi.
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

constexpr double mhz(double f_mhz) { return kTwoPi * f_mhz; }
constexpr double to_mhz(double omega) { return omega / kTwoPi; }

// MHz value f with mhz(f) == omega exactly when such an f is within a few
// ulps of omega/2pi, so written files reload bit-identically. Among those the
// one with the shortest decimal form wins.
inline double to_mhz_roundtrip(double omega) {
  const double f = to_mhz(omega);
  double best = f;
  std::size_t best_len = SIZE_MAX;
  auto consider = [&](double c) {
    if (mhz(c) != omega) return;
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, c);
    const auto len = static_cast<std::size_t>(r.ptr - buf);
    if (len < best_len) {
      best_len = len;
      best = c;
    }
  };
  consider(f);
  double up = f;
  double down = f;
  for (int k = 0; k < 8; ++k) {
    up = std::nextafter(up, INFINITY);
    down = std::nextafter(down, -INFINITY);
    consider(up);
    consider(down);
  }
  return best;
}

}  // namespace aeqnd
