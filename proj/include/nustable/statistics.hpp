#ifndef NUSTABLE_STATISTICS_HPP
#define NUSTABLE_STATISTICS_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "nustable/error.hpp"

namespace nustable {

/// Sorted sample with where it came from.
class EmpiricalSample {
public:
  EmpiricalSample(std::vector<double> values, std::string generator = {}, std::uint64_t seed = 0)
      : values_(std::move(values)), generator_(std::move(generator)), seed_(seed) {
    if (values_.empty()) throw DomainError("EmpiricalSample: empty sample");
    std::sort(values_.begin(), values_.end());
  }

  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  const std::string& generator() const { return generator_; }
  std::uint64_t seed() const { return seed_; }

  /// Fraction of the sample <= x.
  double ecdf(double x) const {
    const auto it = std::upper_bound(values_.begin(), values_.end(), x);
    return static_cast<double>(it - values_.begin()) / static_cast<double>(values_.size());
  }

  /// Fraction of the sample < x.
  double ecdf_strict(double x) const {
    const auto it = std::lower_bound(values_.begin(), values_.end(), x);
    return static_cast<double>(it - values_.begin()) / static_cast<double>(values_.size());
  }

private:
  std::vector<double> values_;
  std::string generator_;
  std::uint64_t seed_;
};

/// sup_x |F_N(x) - F(x)| = max_i max(i/N - F(x_(i)), F(x_(i)) - (i-1)/N).
template <class Cdf>
double ks_statistic(const EmpiricalSample& sample, Cdf&& cdf) {
  const auto xs = sample.values();
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

/// Two-sample statistic sup_x |F_a(x) - F_b(x)| by merging the sorted samples.
inline double ks_two_sample(const EmpiricalSample& a, const EmpiricalSample& b) {
  const auto xa = a.values(), xb = b.values();
  const double na = static_cast<double>(xa.size()), nb = static_cast<double>(xb.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < xa.size() && j < xb.size()) {
    const double x = std::min(xa[i], xb[j]);
    while (i < xa.size() && xa[i] == x) ++i;
    while (j < xb.size() && xb[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

/// Mean of exp(i t X).
inline std::complex<double> empirical_chf_complex(std::span<const double> xs, double t) {
  if (xs.empty()) throw DomainError("empirical_chf: empty sample");
  double re = 0.0, im = 0.0;
  for (double x : xs) {
    re += std::cos(t * x);
    im += std::sin(t * x);
  }
  const double n = static_cast<double>(xs.size());
  return {re / n, im / n};
}

/// Real part of the empirical characteristic function.
inline double empirical_chf(std::span<const double> xs, double t) { return empirical_chf_complex(xs, t).real(); }

/// Mean of exp(-t X).
inline double empirical_laplace(std::span<const double> xs, double t) {
  if (xs.empty()) throw DomainError("empirical_laplace: empty sample");
  double acc = 0.0;
  for (double x : xs) acc += std::exp(-t * x);
  return acc / static_cast<double>(xs.size());
}

inline double sample_mean(std::span<const double> xs) {
  if (xs.empty()) throw DomainError("sample_mean: empty sample");
  double acc = 0.0;
  for (double x : xs) acc += x;
  return acc / static_cast<double>(xs.size());
}

/// Unbiased sample variance (two-pass).
inline double sample_variance(std::span<const double> xs) {
  if (xs.size() < 2) throw DomainError("sample_variance: need at least two values");
  const double m = sample_mean(xs);
  double acc = 0.0;
  for (double x : xs) acc += (x - m) * (x - m);
  return acc / static_cast<double>(xs.size() - 1);
}

/// Smallest eigenvalue of [chf(t_i - t_j)]. A characteristic function of a
/// symmetric law gives a positive semidefinite matrix for every grid.
template <class Chf>
double chf_positive_definiteness_probe(Chf&& chf, std::span<const double> grid) {
  const auto n = static_cast<Eigen::Index>(grid.size());
  if (n == 0) throw DomainError("chf_positive_definiteness_probe: empty grid");
  Eigen::MatrixXd M(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) M(i, j) = chf(grid[i] - grid[j]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(M, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

/// n evenly spaced points covering [lo, hi].
inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return out;
}

} // namespace nustable

#endif // NUSTABLE_STATISTICS_HPP
