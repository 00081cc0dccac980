#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>

namespace aeqnd {

// Half-integer quantum number stored as twice its value.
class HalfInt {
 public:
  constexpr HalfInt() = default;
  constexpr HalfInt(int integer) : twice_(2 * integer) {}  // NOLINT: implicit by design

  static constexpr HalfInt from_twice(int twice) {
    HalfInt h;
    h.twice_ = twice;
    return h;
  }
  // Accepts k/2 values only; throws InvalidArgument otherwise.
  static HalfInt from_double(double value);
  // Parses "9/2", "4.5", "-1", "3".
  static HalfInt parse(const std::string& text);

  constexpr int twice() const { return twice_; }
  constexpr double value() const { return 0.5 * twice_; }
  constexpr bool is_integer() const { return twice_ % 2 == 0; }
  // Only meaningful when is_integer().
  constexpr int as_int() const { return twice_ / 2; }

  constexpr HalfInt operator-() const { return from_twice(-twice_); }
  constexpr HalfInt& operator+=(HalfInt o) {
    twice_ += o.twice_;
    return *this;
  }
  constexpr HalfInt& operator-=(HalfInt o) {
    twice_ -= o.twice_;
    return *this;
  }
  friend constexpr HalfInt operator+(HalfInt a, HalfInt b) { return a += b; }
  friend constexpr HalfInt operator-(HalfInt a, HalfInt b) { return a -= b; }
  friend constexpr auto operator<=>(HalfInt, HalfInt) = default;

  std::string str() const;

 private:
  int twice_ = 0;
};

constexpr HalfInt half(int twice) { return HalfInt::from_twice(twice); }

constexpr HalfInt abs(HalfInt h) { return h.twice() < 0 ? -h : h; }

// j*(j+1) without rounding issues for the sizes in scope.
constexpr double jj1(HalfInt j) { return j.value() * (j.value() + 1.0); }

// Number of m values, 2j+1.
constexpr int multiplicity(HalfInt j) { return j.twice() + 1; }

// |m| <= j and j - m integral, with j >= 0.
constexpr bool valid_pair(HalfInt j, HalfInt m) {
  return j.twice() >= 0 && abs(m) <= j && (j - m).is_integer();
}

// |a-b| <= c <= a+b with a+b+c integral.
constexpr bool triangle(HalfInt a, HalfInt b, HalfInt c) {
  return a.twice() >= 0 && b.twice() >= 0 && c.twice() >= 0 &&
         abs(a - b) <= c && c <= a + b && (a + b + c).is_integer();
}

// (-1)^k for integral k.
constexpr double parity(HalfInt k) { return (k.as_int() % 2 == 0) ? 1.0 : -1.0; }

std::ostream& operator<<(std::ostream& os, HalfInt h);

}  // namespace aeqnd

template <>
struct std::hash<aeqnd::HalfInt> {
  std::size_t operator()(aeqnd::HalfInt h) const noexcept {
    return std::hash<int>{}(h.twice());
  }
};
