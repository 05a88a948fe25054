#ifndef NUSTABLE_FAMILIES_HPP
#define NUSTABLE_FAMILIES_HPP

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <tuple>
#include <vector>

#include "nustable/chebyshev.hpp"
#include "nustable/error.hpp"
#include "nustable/nu_family.hpp"
#include "nustable/rng.hpp"
#include "nustable/series.hpp"

namespace nustable {

/// Generating function P_p(z) = E z^{nu_p} in closed form, z in [0, 1].
///
///   deterministic  z^n                               (p = 1/n)
///   geometric      p z / (1 - (1-p) z)
///   chebyshev      1 / T_n(1/z)                      (p = 1/n^2)
///   melamed        p^{1/m} z / (1 - (1-p) z^m)^{1/m}
///   chebyshev-m    T_n(1/z^m)^{-1/m}                 (p = 1/n^2)
inline double pgf_eval(const NuFamily& family, double p, double z) {
  family.require_admissible(p);
  if (!(z >= 0.0 && z <= 1.0)) throw DomainError("pgf_eval: z outside [0, 1]");
  const double m = family.m;
  switch (family.kind) {
  case FamilyKind::deterministic: return std::pow(z, static_cast<double>(*family.index_of(p)));
  case FamilyKind::geometric: return p * z / (1.0 - (1.0 - p) * z);
  case FamilyKind::chebyshev:
    if (z == 0.0) return 0.0;
    return 1.0 / cheb_eval(*family.index_of(p), 1.0 / z);
  case FamilyKind::melamed:
    return std::pow(p, 1.0 / m) * z / std::pow(1.0 - (1.0 - p) * std::pow(z, m), 1.0 / m);
  case FamilyKind::chebyshev_m:
    if (z == 0.0) return 0.0;
    return std::pow(cheb_eval(*family.index_of(p), 1.0 / std::pow(z, m)), -1.0 / m);
  }
  throw DomainError("pgf_eval: unknown family");
}

/// Laplace-transform fixed point phi(t) = P_p(phi(p t)) with phi(0) = 1,
/// phi'(0) = -1, at any floating or multiprecision type.
template <class Real>
Real phi_as(const NuFamily& family, Real t) {
  using std::cosh;
  using std::exp;
  using std::pow;
  using std::sqrt;
  if (t < 0) throw DomainError("phi: t must be nonnegative");
  const Real m = family.m;
  switch (family.kind) {
  case FamilyKind::deterministic: return exp(-t);
  case FamilyKind::geometric: return 1 / (1 + t);
  case FamilyKind::chebyshev: return 1 / cosh(sqrt(2 * t));
  case FamilyKind::melamed:
    if (family.m == 1) return 1 / (1 + t);
    return pow(1 + m * t, -1 / m);
  case FamilyKind::chebyshev_m:
    if (family.m == 1) return 1 / cosh(sqrt(2 * t));
    return pow(cosh(sqrt(2 * m * t)), -1 / m);
  }
  throw DomainError("phi: unknown family");
}

inline double phi(const NuFamily& family, double t) { return phi_as<double>(family, t); }

/// Right derivative of phi at 0 from one-sided differences at h = 1e-4,
/// 1e-5, 1e-6, Richardson-extrapolated for the O(h) error term.
inline double phi_slope_at_zero(const NuFamily& family) {
  auto diff = [&](double h) { return (phi(family, h) - 1.0) / h; };
  const double d4 = diff(1e-4), d5 = diff(1e-5), d6 = diff(1e-6);
  const double r45 = (10.0 * d5 - d4) / 9.0;
  const double r56 = (10.0 * d6 - d5) / 9.0;
  return 0.5 * (r45 + r56);
}

/// Characteristic function phi(a t^2) of the strictly nu-normal law.
inline double nu_normal_chf(const NuFamily& family, double a, double t) {
  if (!(a > 0.0)) throw DomainError("nu_normal_chf: scale must be positive");
  return phi(family, a * (t * t));
}

/// Characteristic function phi(c |t|^alpha) of the strictly nu-stable law
/// built from the symmetric stable ch.f. exp(-c |t|^alpha).
inline double nu_stable_chf(const NuFamily& family, double alpha, double c, double t) {
  if (!(alpha > 0.0 && alpha <= 2.0)) throw DomainError("nu_stable_chf: alpha outside (0, 2]");
  if (!(c > 0.0)) throw DomainError("nu_stable_chf: scale must be positive");
  const double power = alpha == 2.0 ? t * t : std::pow(std::abs(t), alpha);
  return phi(family, c * power);
}

/// Inverse-cdf sampler for nu_p. Deterministic and geometric use closed
/// forms; the other kinds search the cumulative expand_pgf table and fall
/// back to the fitted geometric tail when the uniform lands in the
/// truncated mass.
class NuSampler {
public:
  NuSampler(const NuFamily& family, double p) : family_(family), p_(p) {
    family.require_admissible(p);
    const bool geometric = family.kind == FamilyKind::geometric ||
                           (family.kind == FamilyKind::melamed && family.m == 1);
    if (family.kind == FamilyKind::deterministic) {
      fixed_ = static_cast<std::size_t>(*family.index_of(p));
    } else if (geometric) {
      log_q_ = std::log1p(-p);
    } else {
      const Pmf pmf = expand_pgf(family, p);
      offset_ = pmf.offset;
      step_ = pmf.step;
      tail_rate_ = pmf.tail_rate;
      cumulative_.resize(pmf.probs.size());
      std::partial_sum(pmf.probs.begin(), pmf.probs.end(), cumulative_.begin());
      last_support_ = offset_ + step_ * ((pmf.probs.size() - 1) / step_);
    }
  }

  std::size_t operator()(RngStream& rng) const {
    if (fixed_) return fixed_;
    if (log_q_ != 0.0) return 1 + static_cast<std::size_t>(std::floor(std::log(rng.uniform_open()) / log_q_));
    const double u = rng.uniform();
    if (u < cumulative_.back()) {
      const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
      return offset_ + static_cast<std::size_t>(it - cumulative_.begin());
    }
    const double log_step_rate = static_cast<double>(step_) * std::log(tail_rate_);
    const double extra = std::floor(std::log(rng.uniform_open()) / log_step_rate);
    return last_support_ + step_ * (1 + static_cast<std::size_t>(extra));
  }

  const NuFamily& family() const { return family_; }
  double p() const { return p_; }

private:
  NuFamily family_;
  double p_;
  std::size_t fixed_ = 0;
  double log_q_ = 0.0;
  std::size_t offset_ = 1, step_ = 1, last_support_ = 1;
  double tail_rate_ = 0.0;
  std::vector<double> cumulative_;
};

/// Shared read-only sampler for (family, p); tables are built once.
inline std::shared_ptr<const NuSampler> nu_sampler(const NuFamily& family, double p) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, double>, std::shared_ptr<const NuSampler>> cache;
  const auto key = std::make_tuple(static_cast<int>(family.kind), family.m, p);
  {
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto sampler = std::make_shared<const NuSampler>(family, p);
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(key, std::move(sampler)).first->second;
}

inline std::size_t sample_nu(const NuFamily& family, double p, RngStream& rng) {
  return (*nu_sampler(family, p))(rng);
}

} // namespace nustable

#endif // NUSTABLE_FAMILIES_HPP
