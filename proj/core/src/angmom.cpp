#include "aeqnd/angmom.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "aeqnd/errors.hpp"

namespace aeqnd {
namespace {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

constexpr int kMaxFactorial = 128;

const std::vector<cpp_int>& factorial_table() {
  static const std::vector<cpp_int> table = [] {
    std::vector<cpp_int> t(kMaxFactorial + 1);
    t[0] = 1;
    for (int n = 1; n <= kMaxFactorial; ++n) t[n] = t[n - 1] * n;
    return t;
  }();
  return table;
}

const cpp_int& fact(int n) {
  if (n < 0 || n > kMaxFactorial) {
    throw InvalidArgument("angular momentum out of supported range");
  }
  return factorial_table()[n];
}

// Integer value of a HalfInt expression known to be integral.
int I(HalfInt h) { return h.as_int(); }

// sign(s) * sqrt(p * s^2) evaluated from exact rationals.
double signed_root(const cpp_rational& p, const cpp_rational& s) {
  if (s == 0) return 0.0;
  const cpp_rational sq = p * s * s;
  const long double num = numerator(sq).convert_to<long double>();
  const long double den = denominator(sq).convert_to<long double>();
  const long double mag = std::sqrt(num / den);
  return static_cast<double>(s > 0 ? mag : -mag);
}

std::uint64_t pack(std::initializer_list<HalfInt> values, std::uint64_t tag) {
  std::uint64_t key = tag;
  for (HalfInt v : values) {
    key = (key << 8) | static_cast<std::uint64_t>((v.twice() + 128) & 0xff);
  }
  return key;
}

using Memo = std::unordered_map<std::uint64_t, double>;

Memo& memo() {
  thread_local Memo table;
  return table;
}

void require_valid(HalfInt j, HalfInt m) {
  if (!valid_pair(j, m)) {
    throw InvalidArgument("invalid angular momentum pair (j=" + j.str() +
                          ", m=" + m.str() + ")");
  }
}

void require_valid(HalfInt j) {
  if (j.twice() < 0) throw InvalidArgument("negative angular momentum " + j.str());
}

bool in_range(HalfInt j) { return j.twice() <= 2 * 30; }

double cg_racah(HalfInt j1, HalfInt m1, HalfInt j2, HalfInt m2, HalfInt J, HalfInt M) {
  cpp_rational pref = cpp_rational(fact(I(j1 + j2 - J)) * fact(I(j1 - j2 + J)) *
                                   fact(I(-j1 + j2 + J)) * (J.twice() + 1),
                                   fact(I(j1 + j2 + J) + 1));
  pref *= cpp_rational(fact(I(J + M)) * fact(I(J - M)) * fact(I(j1 - m1)) *
                       fact(I(j1 + m1)) * fact(I(j2 - m2)) * fact(I(j2 + m2)));

  const int kmin = std::max({0, I(j2 - J - m1), I(j1 + m2 - J)});
  const int kmax = std::min({I(j1 + j2 - J), I(j1 - m1), I(j2 + m2)});
  cpp_rational sum = 0;
  for (int k = kmin; k <= kmax; ++k) {
    const cpp_int den = fact(k) * fact(I(j1 + j2 - J) - k) * fact(I(j1 - m1) - k) *
                        fact(I(j2 + m2) - k) * fact(I(J - j2 + m1) + k) *
                        fact(I(J - j1 - m2) + k);
    const cpp_rational term(cpp_int(1), den);
    if (k % 2 == 0) {
      sum += term;
    } else {
      sum -= term;
    }
  }
  return signed_root(pref, sum);
}

cpp_rational delta_sq(HalfInt a, HalfInt b, HalfInt c) {
  return cpp_rational(fact(I(a + b - c)) * fact(I(a - b + c)) * fact(I(-a + b + c)),
                      fact(I(a + b + c) + 1));
}

double sixj_racah(HalfInt j1, HalfInt j2, HalfInt j3, HalfInt j4, HalfInt j5,
                  HalfInt j6) {
  const cpp_rational pref = delta_sq(j1, j2, j3) * delta_sq(j1, j5, j6) *
                            delta_sq(j4, j2, j6) * delta_sq(j4, j5, j3);
  const std::array<int, 4> alpha = {I(j1 + j2 + j3), I(j1 + j5 + j6), I(j4 + j2 + j6),
                                    I(j4 + j5 + j3)};
  const std::array<int, 3> beta = {I(j1 + j2 + j4 + j5), I(j2 + j3 + j5 + j6),
                                   I(j3 + j1 + j6 + j4)};
  const int tmin = *std::max_element(alpha.begin(), alpha.end());
  const int tmax = *std::min_element(beta.begin(), beta.end());
  cpp_rational sum = 0;
  for (int t = tmin; t <= tmax; ++t) {
    cpp_int den = 1;
    for (int a : alpha) den *= fact(t - a);
    for (int b : beta) den *= fact(b - t);
    const cpp_rational term(fact(t + 1), den);
    if (t % 2 == 0) {
      sum += term;
    } else {
      sum -= term;
    }
  }
  return signed_root(pref, sum);
}

}  // namespace

double clebsch_gordan(HalfInt j1, HalfInt m1, HalfInt j2, HalfInt m2, HalfInt J,
                      HalfInt M) {
  require_valid(j1, m1);
  require_valid(j2, m2);
  require_valid(J, M);
  if (m1 + m2 != M || !triangle(j1, j2, J)) return 0.0;
  if (!in_range(j1) || !in_range(j2) || !in_range(J)) {
    throw InvalidArgument("angular momentum out of supported range");
  }
  const std::uint64_t key = pack({j1, m1, j2, m2, J, M}, 1);
  Memo& table = memo();
  if (auto it = table.find(key); it != table.end()) return it->second;
  const double v = cg_racah(j1, m1, j2, m2, J, M);
  table.emplace(key, v);
  return v;
}

double wigner6j(HalfInt j1, HalfInt j2, HalfInt j3, HalfInt j4, HalfInt j5,
                HalfInt j6) {
  for (HalfInt j : {j1, j2, j3, j4, j5, j6}) {
    require_valid(j);
    if (!in_range(j)) throw InvalidArgument("angular momentum out of supported range");
  }
  if (!triangle(j1, j2, j3) || !triangle(j1, j5, j6) || !triangle(j4, j2, j6) ||
      !triangle(j4, j5, j3)) {
    return 0.0;
  }
  const std::uint64_t key = pack({j1, j2, j3, j4, j5, j6}, 2);
  Memo& table = memo();
  if (auto it = table.find(key); it != table.end()) return it->second;
  const double v = sixj_racah(j1, j2, j3, j4, j5, j6);
  table.emplace(key, v);
  return v;
}

double oscillator_strength(HalfInt Jp, HalfInt Fp, HalfInt J, HalfInt F, HalfInt I) {
  for (HalfInt j : {Jp, Fp, J, F, I}) require_valid(j);
  if (!triangle(F, I, J) || !triangle(Fp, I, Jp) || !triangle(J, Jp, 1)) return 0.0;
  const double six = wigner6j(Fp, I, Jp, J, 1, F);
  if (six == 0.0) return 0.0;
  return parity(Fp + 1 + J + I) * std::sqrt(double((Jp.twice() + 1) * (F.twice() + 1))) *
         six;
}

void clear_angmom_cache() { memo().clear(); }

}  // namespace aeqnd
