#ifndef NUSTABLE_LAPLACE_INVERSION_HPP
#define NUSTABLE_LAPLACE_INVERSION_HPP

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <map>
#include <mutex>
#include <vector>

#include "nustable/error.hpp"

namespace nustable {

/// Working precision of the inversion. Stehfest weights for order N reach
/// about 10^(0.9 N), so 50 digits keep order 30 clear of cancellation.
using InversionReal = boost::multiprecision::cpp_bin_float_50;

inline constexpr int kDefaultStehfestOrder = 30;
inline constexpr int kMinStehfestOrder = 8;
inline constexpr int kMaxStehfestOrder = 40;

/// Stehfest weights V_1..V_N for even N:
///   V_k = (-1)^{k+N/2} sum_{j=floor((k+1)/2)}^{min(k,N/2)}
///         j^{N/2} (2j)! / ((N/2-j)! j! (j-1)! (k-j)! (2j-k)!)
template <class Real = InversionReal>
const std::vector<Real>& stehfest_weights(int order) {
  static std::mutex mu;
  static std::map<int, std::vector<Real>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(order);
  if (it != cache.end()) return it->second;

  const int h = order / 2;
  std::vector<Real> fact(2 * order + 1);
  fact[0] = 1;
  for (int i = 1; i <= 2 * order; ++i) fact[i] = fact[i - 1] * i;

  std::vector<Real> V(order);
  for (int k = 1; k <= order; ++k) {
    Real s = 0;
    for (int j = (k + 1) / 2; j <= std::min(k, h); ++j) {
      Real jp = pow(Real(j), h);
      s += jp * fact[2 * j] / (fact[h - j] * fact[j] * fact[j - 1] * fact[k - j] * fact[2 * j - k]);
    }
    V[k - 1] = ((k + h) % 2 == 0) ? s : Real(-s);
  }
  return cache.emplace(order, std::move(V)).first->second;
}

/// Gaver-Stehfest approximation of f(x) from its Laplace transform F:
///   f(x) ~ (ln 2 / x) sum_{k=1}^{N} V_k F(k ln 2 / x).
///
/// `transform` is called with `Real` arguments so it can be evaluated at the
/// working precision.
template <class Real = InversionReal, class Transform>
double gaver_stehfest(Transform&& transform, double x, int order = kDefaultStehfestOrder) {
  if (!(x > 0.0)) throw DomainError("gaver_stehfest: x must be positive");
  if (order % 2 != 0 || order < kMinStehfestOrder || order > kMaxStehfestOrder)
    throw DomainError("gaver_stehfest: order must be even and within [8, 40]");
  const auto& V = stehfest_weights<Real>(order);
  const Real a = boost::math::constants::ln_two<Real>() / Real(x);
  Real acc = 0;
  for (int k = 1; k <= order; ++k) acc += V[k - 1] * transform(Real(a * k));
  return static_cast<double>(a * acc);
}

} // namespace nustable

#endif // NUSTABLE_LAPLACE_INVERSION_HPP
