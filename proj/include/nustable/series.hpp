#ifndef NUSTABLE_SERIES_HPP
#define NUSTABLE_SERIES_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nustable/chebyshev.hpp"
#include "nustable/error.hpp"
#include "nustable/nu_family.hpp"
#include "nustable/tolerances.hpp"

namespace nustable {

/// Power series a_0 + a_1 z + ... + a_K z^K.
///
/// `tail_bound` bounds sum_{k>K} |a_k| when known. A tail bound of exactly 0
/// marks an exact polynomial, which is what series_compose needs for an
/// outer series with a nonzero inner constant term.
struct TruncatedSeries {
  std::vector<double> coeffs{0.0};
  std::optional<double> tail_bound;

  TruncatedSeries() = default;
  explicit TruncatedSeries(std::vector<double> c, std::optional<double> tail = std::nullopt)
      : coeffs(std::move(c)), tail_bound(tail) {
    if (coeffs.empty()) throw DomainError("TruncatedSeries: empty coefficient vector");
    for (double a : coeffs)
      if (!std::isfinite(a)) throw DomainError("TruncatedSeries: non-finite coefficient");
    if (tail_bound && !(*tail_bound >= 0.0)) throw DomainError("TruncatedSeries: negative tail bound");
  }

  /// Exact polynomial with the given coefficients.
  static TruncatedSeries polynomial(std::vector<double> c) { return TruncatedSeries(std::move(c), 0.0); }

  std::size_t order() const { return coeffs.size() - 1; }
  bool exact_polynomial() const { return tail_bound && *tail_bound == 0.0; }
  double operator[](std::size_t k) const { return k < coeffs.size() ? coeffs[k] : 0.0; }

  double evaluate(double z) const {
    double acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + *it;
    return acc;
  }

  double sum() const { return std::accumulate(coeffs.begin(), coeffs.end(), 0.0); }
};

/// Product truncated at order K.
inline TruncatedSeries series_multiply(const TruncatedSeries& a, const TruncatedSeries& b, std::size_t K) {
  std::vector<double> out(K + 1, 0.0);
  for (std::size_t i = 0; i <= std::min(K, a.order()); ++i) {
    if (a.coeffs[i] == 0.0) continue;
    const std::size_t jmax = std::min(K - i, b.order());
    for (std::size_t j = 0; j <= jmax; ++j) out[i + j] += a.coeffs[i] * b.coeffs[j];
  }
  return TruncatedSeries(std::move(out));
}

/// 1/s to the same order: t_0 = 1/a_0, t_k = -(1/a_0) sum_{j=1..k} a_j t_{k-j}.
inline TruncatedSeries series_reciprocal(const TruncatedSeries& s) {
  const double a0 = s.coeffs.front();
  if (a0 == 0.0) throw DomainError("non-invertible series: zero constant term");
  const std::size_t K = s.order();
  std::vector<double> t(K + 1, 0.0);
  t[0] = 1.0 / a0;
  for (std::size_t k = 1; k <= K; ++k) {
    double acc = 0.0;
    for (std::size_t j = 1; j <= k; ++j) acc += s.coeffs[j] * t[k - j];
    t[k] = -acc / a0;
  }
  return TruncatedSeries(std::move(t));
}

/// outer(inner(z)) up to order K. Requires inner(0) = 0 or an exact
/// polynomial outer; otherwise the truncated coefficients are not determined.
inline TruncatedSeries series_compose(const TruncatedSeries& outer, const TruncatedSeries& inner) {
  const bool inner_vanishes = inner.coeffs.front() == 0.0;
  if (!inner_vanishes && !outer.exact_polynomial())
    throw DomainError("series_compose: inner(0) != 0 requires an exact polynomial outer series");

  const std::size_t K = inner_vanishes ? std::min(outer.order(), inner.order()) : inner.order();
  // With inner(0) = 0, outer terms beyond K only touch orders beyond K.
  std::size_t top = outer.order();
  if (inner_vanishes) top = std::min(top, K);

  TruncatedSeries acc(std::vector<double>(K + 1, 0.0));
  acc.coeffs[0] = outer.coeffs[top];
  for (std::size_t j = top; j-- > 0;) {
    acc = series_multiply(acc, inner, K);
    acc.coeffs[0] += outer.coeffs[j];
  }
  if (outer.exact_polynomial() && inner.exact_polynomial() && outer.order() * inner.order() <= K)
    acc.tail_bound = 0.0;
  return acc;
}

/// s(z)^e via the logarithmic-derivative recurrence
///   k a_0 b_k = sum_{j=1..k} (e j - (k - j)) a_j b_{k-j}.
inline TruncatedSeries series_fractional_power(const TruncatedSeries& s, double exponent) {
  const double a0 = s.coeffs.front();
  if (!(a0 > 0.0)) throw DomainError("series_fractional_power: constant term must be positive");
  const std::size_t K = s.order();
  std::vector<double> b(K + 1, 0.0);
  b[0] = std::pow(a0, exponent);
  for (std::size_t k = 1; k <= K; ++k) {
    double acc = 0.0;
    for (std::size_t j = 1; j <= k; ++j) {
      const double w = exponent * static_cast<double>(j) - static_cast<double>(k - j);
      acc += w * s.coeffs[j] * b[k - j];
    }
    b[k] = acc / (static_cast<double>(k) * a0);
  }
  TruncatedSeries out(std::move(b));
  const bool integer_power = exponent >= 0.0 && exponent == std::floor(exponent);
  if (integer_power && s.exact_polynomial()) {
    std::size_t degree = K;
    while (degree > 0 && s.coeffs[degree] == 0.0) --degree;
    if (degree * static_cast<std::size_t>(exponent) <= K) out.tail_bound = 0.0;
  }
  return out;
}

/// Clamp entries in [-dust, 0) to zero. Returns the clamped mass (a
/// nonpositive number's magnitude) and the most negative entry seen.
struct ClampResult {
  double clamped_mass = 0.0;
  double min_value = 0.0;
  bool ok = true;  // false when an entry is below -dust
};

inline ClampResult clamp_negative_dust(std::vector<double>& values, double dust = tol::kPmfNegativeDust) {
  ClampResult r;
  if (!values.empty()) r.min_value = *std::min_element(values.begin(), values.end());
  for (double& v : values) {
    if (v < -dust) r.ok = false;
    else if (v < 0.0) {
      r.clamped_mass += -v;
      v = 0.0;
    }
  }
  return r;
}

/// Probability mass function of nu_p on {offset, offset + 1, ..., order}.
///
/// `step` is the lattice step of the support (entries off the lattice are
/// stored as zeros). `tail_mass` is the mass beyond `order` implied by the
/// exact normalization P(1) = 1; `tail_bound` is an a priori certified bound
/// on it when one is available.
struct Pmf {
  std::size_t offset = 1;
  std::size_t step = 1;
  std::vector<double> probs;
  double tail_mass = 0.0;
  std::optional<double> tail_bound;
  std::optional<double> tail_mean_bound;  // bound on sum_{k>order} k p_k
  double tail_rate = 0.0;                 // geometric decay per unit k beyond the table
  std::optional<double> mean_exact;
  double clamped_mass = 0.0;

  std::size_t order() const { return offset + probs.size() - 1; }

  double operator()(std::size_t k) const {
    if (k < offset || k > order()) return 0.0;
    return probs[k - offset];
  }

  double table_sum() const { return std::accumulate(probs.begin(), probs.end(), 0.0); }

  double table_mean() const {
    double m = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) m += static_cast<double>(offset + i) * probs[i];
    return m;
  }

  /// sum_{k <= kmax} p_k.
  double partial_sum(std::size_t kmax) const {
    if (kmax < offset) return 0.0;
    const std::size_t last = std::min(kmax, order());
    return std::accumulate(probs.begin(), probs.begin() + static_cast<std::ptrdiff_t>(last - offset + 1), 0.0);
  }

  /// Dense series sum_{k=0..K} p_k z^k. The tail bound accounts for the
  /// dropped table entries when K < order().
  TruncatedSeries to_series(std::size_t K) const {
    std::vector<double> c(K + 1, 0.0);
    double dropped = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
      const std::size_t k = offset + i;
      if (k <= K) c[k] = probs[i];
      else dropped += probs[i];
    }
    std::optional<double> tail;
    if (tail_bound) tail = *tail_bound + dropped;
    return TruncatedSeries(std::move(c), tail);
  }
};

struct PmfCheck {
  double min_prob = 0.0;
  double table_sum = 0.0;
  double mass_with_bound = 0.0;  // table sum + certified tail bound (or tail mass)
  double mean_low = 0.0;         // table mean
  double mean_high = 0.0;        // table mean + tail-mean bound
  double mean_relative_error = 0.0;
  bool nonnegative = true;
  bool normalized = true;
  bool mean_ok = true;
};

inline PmfCheck check_pmf(const Pmf& pmf) {
  PmfCheck c;
  c.min_prob = pmf.probs.empty() ? 0.0 : *std::min_element(pmf.probs.begin(), pmf.probs.end());
  c.nonnegative = c.min_prob >= -tol::kPmfNegativeDust;
  c.table_sum = pmf.table_sum();
  c.mass_with_bound = c.table_sum + pmf.tail_bound.value_or(pmf.tail_mass);
  c.normalized = std::abs(c.mass_with_bound - 1.0) <= tol::kPmfMass;
  c.mean_low = pmf.table_mean();
  c.mean_high = c.mean_low + pmf.tail_mean_bound.value_or(0.0);
  if (pmf.mean_exact) {
    const double target = *pmf.mean_exact;
    double err = 0.0;
    if (target < c.mean_low) err = (c.mean_low - target) / target;
    else if (target > c.mean_high) err = (target - c.mean_high) / target;
    c.mean_relative_error = err;
    c.mean_ok = err <= tol::kMeanRelative;
  }
  return c;
}

/// Decay rate exp(slope) of a least-squares fit of log p_k against k over the
/// last `count` nonzero table entries.
inline double fitted_tail_rate(const Pmf& pmf, std::size_t count = 20) {
  std::vector<double> ks, logs;
  for (std::size_t i = pmf.probs.size(); i-- > 0 && ks.size() < count;) {
    if (pmf.probs[i] > 0.0) {
      ks.push_back(static_cast<double>(pmf.offset + i));
      logs.push_back(std::log(pmf.probs[i]));
    }
  }
  if (ks.size() < 2) return 0.0;
  const double n = static_cast<double>(ks.size());
  const double mk = std::accumulate(ks.begin(), ks.end(), 0.0) / n;
  const double ml = std::accumulate(logs.begin(), logs.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    sxy += (ks[i] - mk) * (logs[i] - ml);
    sxx += (ks[i] - mk) * (ks[i] - mk);
  }
  return std::exp(sxy / sxx);
}

namespace detail {

inline constexpr std::size_t kMaxTableLength = std::size_t{1} << 22;

// sum_{k >= K} r^k and sum_{k >= K} (k + 1) r^k.
inline double geometric_tail(double r, double K) { return std::pow(r, K) / (1.0 - r); }
inline double geometric_tail_weighted(double r, double K) {
  return std::pow(r, K) * ((K + 1.0) * (1.0 - r) + r) / ((1.0 - r) * (1.0 - r));
}

inline Pmf unit_mass(std::size_t k) {
  Pmf pmf;
  pmf.offset = k;
  pmf.step = 1;
  pmf.probs = {1.0};
  pmf.tail_bound = 0.0;
  pmf.tail_mean_bound = 0.0;
  pmf.mean_exact = static_cast<double>(k);
  return pmf;
}

inline void finish(Pmf& pmf) {
  auto clamp = clamp_negative_dust(pmf.probs);
  pmf.clamped_mass = clamp.clamped_mass;
  pmf.tail_mass = std::max(0.0, 1.0 - pmf.table_sum());
}

// Positive zeros a_j of T_n, squared. The zero at 0 for odd n is the linear
// factor x split off before reciprocation and contributes nothing here.
inline std::vector<double> squared_positive_roots(int n) {
  std::vector<double> q;
  for (int j = 1; j <= n / 2; ++j) {
    // cos^2 via the half-angle form, exact for n = 2.
    q.push_back(0.5 * (1.0 + std::cos((2.0 * j - 1.0) * std::numbers::pi / n)));
  }
  return q;
}

inline std::size_t checked_length(double len) {
  if (!(len < static_cast<double>(kMaxTableLength)))
    throw TailBoundTooLarge(std::numeric_limits<double>::infinity(), tol::kTailBound);
  return static_cast<std::size_t>(len);
}

inline Pmf expand_geometric(double p, std::optional<std::size_t> K) {
  const double q = 1.0 - p;
  std::size_t order = K ? *K : checked_length(std::max(1.0, std::ceil(std::log(tol::kTailBound) / std::log(q))));
  if (order < 1) order = 1;
  const double bound = std::pow(q, static_cast<double>(order));
  if (!(bound < tol::kTailBound)) throw TailBoundTooLarge(bound, tol::kTailBound);
  Pmf pmf;
  pmf.offset = 1;
  pmf.step = 1;
  pmf.probs.resize(order);
  double w = p;
  for (std::size_t i = 0; i < order; ++i, w *= q) pmf.probs[i] = w;
  pmf.tail_bound = bound;
  pmf.tail_mean_bound = bound * (static_cast<double>(order) + 1.0 / p);
  pmf.tail_rate = q;
  pmf.mean_exact = 1.0 / p;
  finish(pmf);
  return pmf;
}

// P(z) = p^{1/m} z (1 - (1-p) z^m)^{-1/m}; mass at 1 + m i is
// p^{1/m} (1/m)_i / i! (1-p)^i, and (1/m)_i / i! <= 1.
inline Pmf expand_melamed(int m, double p, std::optional<std::size_t> K) {
  const double q = 1.0 - p;
  const double alpha = 1.0 / m;
  const double lead = std::pow(p, alpha);
  auto tail_after = [&](double last_i) { return lead * std::pow(q, last_i + 1.0) / p; };
  std::size_t last_i;
  if (K) {
    if (*K < 1) throw TailBoundTooLarge(1.0, tol::kTailBound);
    last_i = (*K - 1) / static_cast<std::size_t>(m);
  } else {
    const double need = std::ceil(std::log(tol::kTailBound * p / lead) / std::log(q)) - 1.0;
    last_i = checked_length(std::max(0.0, need));
    while (!(tail_after(static_cast<double>(last_i)) < tol::kTailBound)) ++last_i;
  }
  const double bound = tail_after(static_cast<double>(last_i));
  if (!(bound < tol::kTailBound)) throw TailBoundTooLarge(bound, tol::kTailBound);

  Pmf pmf;
  pmf.offset = 1;
  pmf.step = static_cast<std::size_t>(m);
  pmf.probs.assign(checked_length(static_cast<double>(last_i) * m + 1.0), 0.0);
  double c = 1.0, qi = 1.0;
  for (std::size_t i = 0; i <= last_i; ++i) {
    if (i > 0) {
      c *= (static_cast<double>(i) - 1.0 + alpha) / static_cast<double>(i);
      qi *= q;
    }
    pmf.probs[i * m] = lead * c * qi;
  }
  const double I1 = static_cast<double>(last_i) + 1.0;
  const double qI1 = std::pow(q, I1);
  pmf.tail_bound = bound;
  pmf.tail_mean_bound = lead * (qI1 / p + m * qI1 * (I1 * p + q) / (p * p));
  pmf.tail_rate = std::pow(q, alpha);
  pmf.mean_exact = 1.0 / p;
  finish(pmf);
  return pmf;
}

// 1/T_n(1/z) = z^n 2^{1-n} prod_j 1/(1 - a_j^2 z^2): every factor is a
// geometric series with nonnegative coefficients, so the product is formed
// without cancellation. The coefficient of z^{k+1} is
// sum_j x_j^k / T_n'(x_j) over all zeros x_j, with |1/T_n'(x_j)| = sin(theta_j)/n,
// hence p_{k+1} <= r^k for r = cos(pi/(2n)) and the tail beyond K is at most
// r^K / (1 - r).
inline Pmf expand_chebyshev(int n, std::optional<std::size_t> K) {
  if (n == 1) return unit_mass(1);
  if (n > kMaxChebDegree) throw DegreeTooLarge(n, kMaxChebDegree);
  const double r = std::cos(std::numbers::pi / (2.0 * n));
  std::size_t order;
  if (K) {
    order = *K;
  } else {
    order = checked_length(std::ceil(std::log(tol::kTailBound * (1.0 - r)) / std::log(r)));
    while (!(detail::geometric_tail(r, static_cast<double>(order)) < tol::kTailBound)) ++order;
  }
  const double bound = order < static_cast<std::size_t>(n) ? 1.0 : geometric_tail(r, static_cast<double>(order));
  if (!(bound < tol::kTailBound)) throw TailBoundTooLarge(bound, tol::kTailBound);

  const std::size_t W = (order - n) / 2 + 1;
  std::vector<double> u(W, 0.0);
  u[0] = 1.0;
  for (double q : squared_positive_roots(n))
    for (std::size_t i = 1; i < W; ++i) u[i] += q * u[i - 1];

  Pmf pmf;
  pmf.offset = static_cast<std::size_t>(n);
  pmf.step = 2;
  pmf.probs.assign(order - n + 1, 0.0);
  const double scale = std::ldexp(1.0, 1 - n);
  for (std::size_t i = 0; i < W; ++i) pmf.probs[2 * i] = u[i] * scale;
  pmf.tail_bound = bound;
  pmf.tail_mean_bound = geometric_tail_weighted(r, static_cast<double>(order));
  pmf.tail_rate = r;
  pmf.mean_exact = static_cast<double>(n) * n;
  finish(pmf);
  return pmf;
}

// (T_n(1/z^m))^{-1/m} = z^n 2^{-(n-1)/m} prod_j (1 - a_j^2 z^{2m})^{-1/m}
//                     = z^n 2^{-(n-1)/m} exp((1/m) sum_l s_l u^l / l),  u = z^{2m},
// with power sums s_l = sum_j a_j^{2l}. The exponential recurrence
// k H_k = (1/m) sum_l s_l H_{k-l} has only nonnegative terms. Since
// (1/m)_i / i! <= 1 the coefficients are dominated by 2^{(n-1)(1-1/m)} times
// the m = 1 coefficients, which gives the certified tail bound.
inline Pmf expand_chebyshev_m(int m, int n, std::optional<std::size_t> K) {
  if (m == 1) return expand_chebyshev(n, K);
  if (n == 1) return unit_mass(1);
  if (n > kMaxChebDegree) throw DegreeTooLarge(n, kMaxChebDegree);
  const double r = std::cos(std::numbers::pi / (2.0 * n));
  const double alpha = 1.0 / m;
  const double log_b = (n - 1) * std::numbers::ln2;
  const double inflate = std::exp(log_b * (1.0 - alpha));
  const std::size_t step = 2 * static_cast<std::size_t>(m);
  // Certified bound when the last retained u-index is i.
  auto bound_at = [&](double i) { return inflate * geometric_tail(r, n + 2.0 * i + 1.0); };

  std::size_t last_i;
  if (K) {
    if (*K < static_cast<std::size_t>(n)) throw TailBoundTooLarge(1.0, tol::kTailBound);
    last_i = (*K - n) / step;
  } else {
    const double need = (std::log(tol::kTailBound * (1.0 - r) / inflate) / std::log(r) - n - 1.0) / 2.0;
    last_i = checked_length(std::max(0.0, std::ceil(need)));
    while (!(bound_at(static_cast<double>(last_i)) < tol::kTailBound)) ++last_i;
  }
  const double bound = bound_at(static_cast<double>(last_i));
  if (!(bound < tol::kTailBound)) throw TailBoundTooLarge(bound, tol::kTailBound);

  const std::size_t W = last_i + 1;
  const auto q = squared_positive_roots(n);
  std::vector<double> s(W, 0.0), powers(q.begin(), q.end());
  for (std::size_t l = 1; l < W; ++l) {
    double acc = 0.0;
    for (std::size_t j = 0; j < q.size(); ++j) {
      acc += powers[j];
      powers[j] *= q[j];
    }
    s[l] = acc;
  }
  std::vector<double> H(W, 0.0);
  H[0] = 1.0;
  for (std::size_t k = 1; k < W; ++k) {
    double acc = 0.0;
    for (std::size_t l = 1; l <= k; ++l) acc += s[l] * H[k - l];
    H[k] = alpha * acc / static_cast<double>(k);
  }

  Pmf pmf;
  pmf.offset = static_cast<std::size_t>(n);
  pmf.step = step;
  pmf.probs.assign(last_i * step + 1, 0.0);
  const double scale = std::exp(-alpha * log_b);
  for (std::size_t i = 0; i < W; ++i) pmf.probs[i * step] = H[i] * scale;
  pmf.tail_bound = bound;
  pmf.tail_mean_bound = m * inflate * geometric_tail_weighted(r, n + 2.0 * static_cast<double>(last_i) + 1.0);
  pmf.tail_rate = std::pow(r, alpha);
  pmf.mean_exact = static_cast<double>(n) * n;
  finish(pmf);
  return pmf;
}

} // namespace detail

/// Probability mass function of nu_p for an admissible p.
///
/// With `K` unset the truncation order is the smallest one whose certified
/// tail bound is below 1e-10. An explicit `K` that cannot certify that bound
/// throws TailBoundTooLarge carrying the bound.
inline Pmf expand_pgf(const NuFamily& family, double p, std::optional<std::size_t> K = std::nullopt) {
  family.require_admissible(p);
  switch (family.kind) {
  case FamilyKind::deterministic: {
    const auto n = static_cast<std::size_t>(*family.index_of(p));
    if (K && *K < n) throw TailBoundTooLarge(1.0, tol::kTailBound);
    return detail::unit_mass(n);
  }
  case FamilyKind::geometric: return detail::expand_geometric(p, K);
  case FamilyKind::chebyshev: return detail::expand_chebyshev(*family.index_of(p), K);
  case FamilyKind::melamed:
    return family.m == 1 ? detail::expand_geometric(p, K) : detail::expand_melamed(family.m, p, K);
  case FamilyKind::chebyshev_m: return detail::expand_chebyshev_m(family.m, *family.index_of(p), K);
  }
  throw DomainError("expand_pgf: unknown family");
}

/// Outcome of checking a polynomial against the hypotheses of the
/// reciprocal-reversal construction and expanding z^k / (z^d P(1/z)).
struct ReversalReport {
  bool even_powers = false;
  bool positive_leading = false;
  bool unit_at_one = false;
  bool zeros_inside = false;
  bool nonnegative = false;
  double min_coefficient = 0.0;
  double sum = 0.0;
  double clamped_mass = 0.0;
  TruncatedSeries expansion;
  std::vector<std::string> failures;

  bool hypotheses_hold() const { return even_powers && positive_leading && unit_at_one && zeros_inside; }
  bool valid() const { return hypotheses_hold() && nonnegative; }
};

namespace detail {

// Number of sign changes of R on a uniform grid over (0, 1), skipping exact zeros.
inline int sign_changes_on_unit_interval(std::span<const double> R, int grid = 20000) {
  auto eval = [&](long double w) {
    long double acc = 0.0L;
    for (std::size_t i = R.size(); i-- > 0;) acc = acc * w + R[i];
    return acc;
  };
  int changes = 0, last_sign = 0;
  for (int i = 1; i < grid; ++i) {
    const long double v = eval(static_cast<long double>(i) / grid);
    const int sgn = (v > 0) - (v < 0);
    if (sgn == 0) continue;
    if (last_sign != 0 && sgn != last_sign) ++changes;
    last_sign = sgn;
  }
  return changes;
}

} // namespace detail

/// Checks P (coefficients b_0..b_d in the monomial basis) for even powers,
/// a positive leading coefficient, P(1) = 1 and all zeros in (-1, 1), then
/// expands z^k / Q(z), Q(z) = z^d P(1/z), to order K.
///
/// Zeros are certified by a sign-change scan of R(w) = P(sqrt w) on (0, 1)
/// after removing the zero roots: d/2 - (zero roots) sign changes means every
/// zero is real, simple and inside. Hypothesis violations are reported in
/// `failures`; nothing is thrown for them.
inline ReversalReport validate_lemma1(std::span<const double> poly, std::size_t k, std::size_t K) {
  if (k < 1) throw DomainError("validate_lemma1: numerator power must be positive");
  ReversalReport rep;
  std::size_t d = poly.size();
  while (d > 0 && poly[d - 1] == 0.0) --d;
  if (d == 0) {
    rep.failures.emplace_back("zero polynomial");
    return rep;
  }
  --d;  // degree

  rep.even_powers = d % 2 == 0;
  for (std::size_t j = 1; j <= d; j += 2)
    if (poly[j] != 0.0) rep.even_powers = false;
  if (!rep.even_powers) rep.failures.emplace_back("polynomial has odd powers");

  rep.positive_leading = poly[d] > 0.0;
  if (!rep.positive_leading) rep.failures.emplace_back("leading coefficient is not positive");

  const double at_one = std::accumulate(poly.begin(), poly.begin() + static_cast<std::ptrdiff_t>(d + 1), 0.0);
  rep.unit_at_one = std::abs(at_one - 1.0) <= 1e-12;
  if (!rep.unit_at_one) rep.failures.emplace_back("P(1) != 1");

  if (rep.even_powers) {
    std::vector<double> R;
    for (std::size_t j = 0; j <= d; j += 2) R.push_back(poly[j]);
    std::size_t zero_roots = 0;
    while (zero_roots < R.size() && R[zero_roots] == 0.0) ++zero_roots;
    std::vector<double> reduced(R.begin() + static_cast<std::ptrdiff_t>(zero_roots), R.end());
    const int needed = static_cast<int>(reduced.size()) - 1;
    rep.zeros_inside = needed == 0 || detail::sign_changes_on_unit_interval(reduced) == needed;
  }
  if (!rep.zeros_inside) rep.failures.emplace_back("zeros not all within (-1, 1)");

  if (K < k) throw DomainError("validate_lemma1: order below numerator power");
  if (poly[d] == 0.0) return rep;
  std::vector<double> Q(K - k + 1, 0.0);
  for (std::size_t i = 0; i <= std::min(d, K - k); ++i) Q[i] = poly[d - i];
  const auto inv = series_reciprocal(TruncatedSeries::polynomial(Q));
  std::vector<double> c(K + 1, 0.0);
  for (std::size_t i = 0; i + k <= K; ++i) c[i + k] = inv.coeffs[i];

  rep.min_coefficient = *std::min_element(c.begin(), c.end());
  rep.nonnegative = rep.min_coefficient >= -tol::kPmfNegativeDust;
  if (!rep.nonnegative) rep.failures.emplace_back("expansion has negative coefficients");
  auto clamp = clamp_negative_dust(c);
  rep.clamped_mass = clamp.clamped_mass;
  rep.sum = std::accumulate(c.begin(), c.end(), 0.0);
  rep.expansion = TruncatedSeries(std::move(c));
  return rep;
}

} // namespace nustable

#endif // NUSTABLE_SERIES_HPP
