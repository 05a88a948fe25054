#ifndef NUSTABLE_CHEBYSHEV_HPP
#define NUSTABLE_CHEBYSHEV_HPP

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "nustable/error.hpp"

namespace nustable {

__extension__ typedef __int128 int128_t;

/// Largest degree whose monomial coefficients fit in a signed 128-bit integer.
/// The largest |c_j| of T_n grows like (1+sqrt 2)^n / 2, so 96 leaves headroom.
inline constexpr int kMaxChebDegree = 96;

/// Chebyshev polynomial of the first kind with exact monomial coefficients.
///
/// coeffs[j] is the coefficient of x^j. Only powers with the parity of the
/// degree are nonzero; the leading coefficient is 2^(n-1) for n >= 1.
struct ChebPoly {
  int degree = 0;
  std::vector<int128_t> coeffs{1};

  /// Coefficients rounded to double (exact while |c_j| < 2^53).
  std::vector<double> as_doubles() const {
    std::vector<double> out(coeffs.size());
    std::transform(coeffs.begin(), coeffs.end(), out.begin(),
                   [](int128_t c) { return static_cast<double>(c); });
    return out;
  }

  /// Sum of the coefficients, i.e. T_n(1), computed exactly.
  int128_t coefficient_sum() const {
    int128_t s = 0;
    for (int128_t c : coeffs) s += c;
    return s;
  }
};

inline std::string to_string(int128_t v) {
  if (v == 0) return "0";
  const bool neg = v < 0;
  // Work with negative values so the minimum is representable.
  std::string digits;
  int128_t w = neg ? v : -v;
  while (w != 0) {
    digits.push_back(static_cast<char>('0' - static_cast<int>(w % 10)));
    w /= 10;
  }
  if (neg) digits.push_back('-');
  std::reverse(digits.begin(), digits.end());
  return digits;
}

/// Exact coefficients of T_n from T_0 = 1, T_1 = x, T_{k+1} = 2x T_k - T_{k-1}.
inline ChebPoly cheb_coeffs(int n) {
  if (n < 0) throw DomainError("cheb_coeffs: negative degree");
  if (n > kMaxChebDegree) throw DegreeTooLarge(n, kMaxChebDegree);

  std::vector<int128_t> prev{1};
  if (n == 0) return {0, prev};
  std::vector<int128_t> cur{0, 1};
  for (int k = 1; k < n; ++k) {
    std::vector<int128_t> next(k + 2, 0);
    for (int j = 0; j <= k; ++j) {
      int128_t doubled;
      if (__builtin_mul_overflow(cur[j], int128_t{2}, &doubled) ||
          __builtin_add_overflow(next[j + 1], doubled, &next[j + 1]))
        throw DegreeTooLarge(n, kMaxChebDegree);
    }
    for (std::size_t j = 0; j < prev.size(); ++j) {
      if (__builtin_sub_overflow(next[j], prev[j], &next[j]))
        throw DegreeTooLarge(n, kMaxChebDegree);
    }
    prev = std::move(cur);
    cur = std::move(next);
  }
  return {n, cur};
}

/// T_n(x) through the trigonometric form on (-1, 1) and the hyperbolic form
/// outside; |x| == 1 takes the hyperbolic branch.
inline double cheb_eval(int n, double x) {
  if (n < 0) throw DomainError("cheb_eval: negative degree");
  if (!std::isfinite(x)) throw DomainError("cheb_eval: non-finite argument");
  const double nd = static_cast<double>(n);
  if (std::abs(x) < 1.0) return std::cos(nd * std::acos(x));
  const double magnitude = std::cosh(nd * std::acosh(std::abs(x)));
  return (x < 0.0 && n % 2 == 1) ? -magnitude : magnitude;
}

/// Zeros of T_n in ascending order. Uses sin((n-2k+1)pi/(2n)), which equals
/// cos((2k-1)pi/(2n)) and keeps the set exactly antisymmetric.
inline std::vector<double> cheb_roots(int n) {
  if (n < 1) throw DomainError("cheb_roots: degree must be positive");
  std::vector<double> roots;
  roots.reserve(n);
  for (int k = n; k >= 1; --k) {
    const double num = static_cast<double>(n - 2 * k + 1);
    roots.push_back(std::sin(num * std::numbers::pi / (2.0 * n)));
  }
  return roots;
}

/// max over the grid of |T_n(T_m(x)) - T_{nm}(x)|.
inline double composition_check(int n, int m, std::span<const double> grid) {
  if (n < 1 || m < 1) throw DomainError("composition_check: degrees must be positive");
  double worst = 0.0;
  for (double x : grid) {
    if (!(x >= -1.0 && x <= 1.0))
      throw DomainError("composition_check: grid point outside [-1, 1]");
    const double lhs = cheb_eval(n, cheb_eval(m, x));
    const double rhs = cheb_eval(n * m, x);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

} // namespace nustable

#endif // NUSTABLE_CHEBYSHEV_HPP
